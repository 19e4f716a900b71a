// Form-mode schema composition. The form emits canonical DSL text; the
// server's parser is the only authority on what the text means.

export interface FormTerm {
  concept: string;
  negated: boolean;
}

export interface SchemaForm {
  name: string;
  antecedent: FormTerm[];
  consequent: FormTerm[]; // empty = non-implicative
}

function renderTerm(t: FormTerm): string {
  return (t.negated ? '!' : '') + t.concept;
}

export function emitSchemaLine(form: SchemaForm): string {
  if (form.antecedent.length === 0) {
    throw new Error('a schema needs at least one condition term');
  }
  const ant = form.antecedent.map(renderTerm).join(', ');
  if (form.consequent.length === 0) {
    return `schema ${form.name}: <${ant}>`;
  }
  const cons = form.consequent.map(renderTerm).join(', ');
  return `schema ${form.name}: <${ant} -> ${cons}>`;
}

// Re-derive the form state from a canonical schema line, so a server
// round trip reproduces what the user composed.
export function parseSchemaLine(line: string): SchemaForm {
  const m = line.match(/^schema\s+(\w+):\s*<(.*)>\s*$/);
  if (!m) throw new Error(`not a schema line: ${line}`);
  const [, name, body] = m;
  const parseSide = (side: string): FormTerm[] =>
    side.split(',').map((raw) => {
      const token = raw.trim();
      return token.startsWith('!')
        ? { concept: token.slice(1), negated: true }
        : { concept: token, negated: false };
    });
  const arrow = body.indexOf('->');
  if (arrow === -1) {
    return { name, antecedent: parseSide(body), consequent: [] };
  }
  return {
    name,
    antecedent: parseSide(body.slice(0, arrow)),
    consequent: parseSide(body.slice(arrow + 2)),
  };
}

export const OPERATORS = ['prune', 'conform', 'unexpected', 'exception'] as const;
export type OperatorKind = (typeof OPERATORS)[number];
export const SCOPES = ['condition', 'conclusion', 'both'] as const;

export function operatorLabel(kind: OperatorKind, scope?: string): string {
  return kind === 'unexpected' ? `${kind}(${scope ?? 'condition'})` : kind;
}
