import './style.css';
import { ApiError, Client, type ConceptNode, type LogEntry } from './api';
import { renderLogCard, renderResultPanel } from './console';
import { emitSchemaLine, OPERATORS, SCOPES, type FormTerm } from './schema';
import { initialState, setupReady, toggleExpanded } from './state';
import { renderRuleTable } from './table';
import { buildTree, renderTree } from './tree';

const client = new Client('');
const state = initialState();
let concepts: ConceptNode[] = [];
let logEntries: LogEntry[] = [];
let resultIds = new Map<string, string>(); // result name -> ruleset id

const $ = (id: string) => document.getElementById(id)!;

function banner(message: string) {
  const el = document.createElement('div');
  el.className = 'banner';
  el.textContent = message;
  const close = document.createElement('button');
  close.textContent = '×';
  close.addEventListener('click', () => el.remove());
  el.appendChild(close);
  $('banners').appendChild(el);
}

async function guard<T>(work: () => Promise<T>): Promise<T | null> {
  try {
    return await work();
  } catch (err) {
    if (err instanceof ApiError) {
      banner(`${err.body.code}: ${err.body.message}`);
      if (err.status === 409) banner('session busy; refresh the log and retry');
    } else {
      banner(String(err));
    }
    return null;
  }
}

// ----------------------------------------------------------------- setup

async function uploadFromTextarea(kind: 'dataset' | 'ontology' | 'rules') {
  const text = ($(`${kind}-input`) as HTMLTextAreaElement).value;
  if (!text.trim()) return banner(`paste the ${kind} first`);
  await guard(async () => {
    if (kind === 'dataset') {
      const resp = await client.uploadDataset(text);
      state.datasetId = resp.id;
      $('dataset-status').textContent =
        `dataset ${resp.id}: ${resp.stats.n} transactions, ${resp.stats.attributes} attributes`;
    } else if (kind === 'ontology') {
      const resp = await client.uploadOntology(text);
      state.ontologyId = resp.id;
      $('ontology-status').textContent = `ontology ${resp.id}: ${resp.concepts} concepts`;
      await refreshConcepts();
    } else {
      if (!state.datasetId) return banner('upload the dataset first');
      const resp = await client.uploadRules(text, state.datasetId);
      state.rulesetId = resp.ruleset;
      $('rules-status').textContent = `rule set ${resp.ruleset}: ${resp.count} rules`;
    }
    ($('open-session') as HTMLButtonElement).disabled = !setupReady(state);
  });
}

async function mineRules() {
  if (!state.datasetId) return banner('upload the dataset first');
  await guard(async () => {
    const resp = await client.mine(state.datasetId!, {
      min_sup: ($('min-sup') as HTMLInputElement).value,
      max_sup: ($('max-sup') as HTMLInputElement).value,
      min_conf: ($('min-conf') as HTMLInputElement).value,
      max_consequent_len: Number(($('max-cons') as HTMLInputElement).value),
    });
    state.rulesetId = resp.ruleset;
    $('rules-status').textContent = `mined ${resp.count} rules (${resp.ruleset})`;
    ($('open-session') as HTMLButtonElement).disabled = !setupReady(state);
  });
}

async function openSession() {
  await guard(async () => {
    const resp = await client.createSession(
      state.rulesetId!, state.ontologyId!, state.datasetId!,
    );
    state.sessionId = resp.id;
    $('session-status').textContent =
      `session ${resp.id.slice(0, 8)}…, working set ${resp.working_count}`;
    document.body.classList.add('session-open');
    await refreshLog();
  });
}

// --------------------------------------------------------- concept browser

async function refreshConcepts() {
  if (!state.ontologyId) return;
  const resp = await guard(() => client.concepts(state.ontologyId!));
  if (!resp) return;
  concepts = resp.concepts;
  drawTree();
  const picker = $('term-concept') as HTMLSelectElement;
  picker.innerHTML = '';
  for (const c of [...concepts].sort((a, b) => a.name.localeCompare(b.name))) {
    const opt = document.createElement('option');
    opt.value = c.name;
    opt.textContent = c.name;
    picker.appendChild(opt);
  }
}

function drawTree() {
  const host = $('concept-tree');
  host.innerHTML = '';
  host.appendChild(
    renderTree(
      buildTree(concepts),
      state.expandedConcepts,
      (path) => {
        toggleExpanded(state, path);
        drawTree();
      },
      (name) => void selectConcept(name),
    ),
  );
}

async function selectConcept(name: string) {
  state.selectedConcept = name;
  const resp = await guard(() =>
    client.extension(state.ontologyId!, name, state.datasetId ?? undefined),
  );
  if (!resp) return;
  const host = $('extension');
  host.innerHTML = '';
  const title = document.createElement('h3');
  title.textContent = `${name}: ${resp.count} items`;
  host.appendChild(title);
  if (resp.count === 0) {
    const warn = document.createElement('p');
    warn.className = 'warning';
    warn.textContent = 'empty extension: operators over this concept match nothing';
    host.appendChild(warn);
  }
  const list = document.createElement('div');
  list.className = 'item-chips';
  for (const item of resp.items) {
    const chip = document.createElement('span');
    chip.className = 'chip';
    chip.textContent = item;
    list.appendChild(chip);
  }
  host.appendChild(list);
}

// ------------------------------------------------------------ schema editor

const formAntecedent: FormTerm[] = [];
const formConsequent: FormTerm[] = [];

function drawFormTerms() {
  for (const [listId, terms] of [
    ['form-ant', formAntecedent],
    ['form-cons', formConsequent],
  ] as const) {
    const host = $(listId);
    host.innerHTML = '';
    terms.forEach((t, i) => {
      const chip = document.createElement('span');
      chip.className = 'chip term-chip';
      chip.textContent = (t.negated ? '!' : '') + t.concept;
      chip.title = 'click to remove';
      chip.addEventListener('click', () => {
        terms.splice(i, 1);
        drawFormTerms();
      });
      host.appendChild(chip);
    });
  }
}

function addFormTerm() {
  const concept = ($('term-concept') as HTMLSelectElement).value;
  if (!concept) return;
  const negated = ($('term-negated') as HTMLInputElement).checked;
  const side = ($('term-side') as HTMLSelectElement).value;
  (side === 'consequent' ? formConsequent : formAntecedent).push({ concept, negated });
  drawFormTerms();
}

function emitFromForm() {
  const name = ($('form-name') as HTMLInputElement).value.trim() || 'S1';
  try {
    const line = emitSchemaLine({
      name, antecedent: formAntecedent, consequent: formConsequent,
    });
    const editor = $('schema-editor') as HTMLTextAreaElement;
    editor.value = editor.value ? `${editor.value.trimEnd()}\n${line}\n` : `${line}\n`;
    $('editor-diagnostics').textContent = '';
  } catch (err) {
    $('editor-diagnostics').textContent = String(err);
  }
}

async function submitSchemas() {
  if (!state.sessionId) return banner('open a session first');
  const script = ($('schema-editor') as HTMLTextAreaElement).value;
  const resp = await guard(() => client.addSchemas(state.sessionId!, script));
  const diag = $('editor-diagnostics');
  if (!resp) return;
  diag.textContent = '';
  state.schemaNames.push(...resp.schemas.map((s) => s.name));
  const picker = $('apply-schema') as HTMLSelectElement;
  for (const s of resp.schemas) {
    const opt = document.createElement('option');
    opt.value = s.name;
    opt.textContent = s.text.replace(/^schema /, '');
    picker.appendChild(opt);
  }
  banner(`registered ${resp.schemas.length} schema(s)`);
}

// --------------------------------------------------------- operator console

async function applyOperator() {
  if (!state.sessionId) return;
  const op = ($('apply-op') as HTMLSelectElement).value;
  const schema = ($('apply-schema') as HTMLSelectElement).value;
  if (!schema) return banner('register a schema first');
  const scope = op === 'unexpected'
    ? ($('apply-scope') as HTMLSelectElement).value
    : undefined;
  const mode = ($('apply-mode') as HTMLSelectElement).value;
  const resp = await guard(() =>
    client.apply(state.sessionId!, op, schema, scope, mode),
  );
  if (!resp) return;
  if (resp.entry.result_name) {
    resultIds.set(resp.entry.result_name, resp.result);
  }
  await refreshLog();
  if (resp.entry.result_name) await openResult(resp.entry.result_name);
}

async function undoLast() {
  if (!state.sessionId) return;
  const resp = await guard(() => client.undo(state.sessionId!));
  if (!resp) return;
  resultIds = new Map([...resultIds].filter(([name]) => resp.results.includes(name)));
  if (state.openResult && !resp.results.includes(state.openResult.name)) {
    state.openResult = null;
    $('result-host').innerHTML = '';
  }
  await refreshLog();
}

async function refreshLog() {
  if (!state.sessionId) return;
  const resp = await guard(() => client.log(state.sessionId!));
  if (!resp) return;
  logEntries = resp.log;
  $('working-count').textContent =
    `working set: ${resp.working_count} of ${resp.original_count} mined rules`;
  const host = $('log-cards');
  host.innerHTML = '';
  for (const entry of logEntries) {
    host.appendChild(renderLogCard(entry, (name) => void openResult(name)));
  }
  ($('undo') as HTMLButtonElement).disabled = logEntries.length === 0;
  await showWorkingSet();
}

async function showWorkingSet() {
  if (!state.rulesetId || !state.sessionId) return;
  // the working set is content addressed: after a prune the apply response
  // already registered it; the original ruleset id shows pre-session rules
}

async function openResult(name: string) {
  const id = resultIds.get(name);
  if (!id) return;
  state.openResult = { name, id };
  state.resultPager.offset = 0;
  await drawResult();
}

async function drawResult() {
  if (!state.openResult) return;
  const { name, id } = state.openResult;
  const { offset, limit, sort } = state.resultPager;
  const page = await guard(() => client.result(id, offset, limit, sort));
  if (!page) return;
  const host = $('result-host');
  host.innerHTML = '';
  host.appendChild(
    renderResultPanel(
      `${name} (${page.total} rules)`,
      page,
      (newOffset) => {
        state.resultPager.offset = newOffset;
        void drawResult();
      },
      (newSort) => {
        state.resultPager.sort = newSort;
        state.resultPager.offset = 0;
        void drawResult();
      },
    ),
  );
}

async function browseWorkingRules() {
  if (!state.rulesetId) return;
  const { offset, limit, sort } = state.workingPager;
  const page = await guard(() => client.ruleset(state.rulesetId!, offset, limit, sort));
  if (!page) return;
  const host = $('ruleset-host');
  host.innerHTML = '';
  host.appendChild(
    renderRuleTable(
      page,
      (newOffset) => {
        state.workingPager.offset = newOffset;
        void browseWorkingRules();
      },
      (newSort) => {
        state.workingPager.sort = newSort;
        state.workingPager.offset = 0;
        void browseWorkingRules();
      },
    ),
  );
}

// ----------------------------------------------------------------- wiring

export function wire() {
  $('upload-dataset').addEventListener('click', () => void uploadFromTextarea('dataset'));
  $('upload-ontology').addEventListener('click', () => void uploadFromTextarea('ontology'));
  $('upload-rules').addEventListener('click', () => void uploadFromTextarea('rules'));
  $('mine').addEventListener('click', () => void mineRules());
  $('open-session').addEventListener('click', () => void openSession());
  $('add-term').addEventListener('click', addFormTerm);
  $('emit-schema').addEventListener('click', emitFromForm);
  $('submit-schemas').addEventListener('click', () => void submitSchemas());
  $('apply').addEventListener('click', () => void applyOperator());
  $('undo').addEventListener('click', () => void undoLast());
  $('browse-rules').addEventListener('click', () => void browseWorkingRules());
  ($('apply-op') as HTMLSelectElement).addEventListener('change', (e) => {
    const scopeRow = $('scope-row');
    scopeRow.style.display =
      (e.target as HTMLSelectElement).value === 'unexpected' ? '' : 'none';
  });

  const opPicker = $('apply-op') as HTMLSelectElement;
  for (const op of OPERATORS) {
    const opt = document.createElement('option');
    opt.value = op;
    opt.textContent = op;
    opPicker.appendChild(opt);
  }
  const scopePicker = $('apply-scope') as HTMLSelectElement;
  for (const scope of SCOPES) {
    const opt = document.createElement('option');
    opt.value = scope;
    opt.textContent = scope;
    scopePicker.appendChild(opt);
  }
  $('scope-row').style.display = 'none';
}

if (typeof document !== 'undefined' && document.getElementById('apply-op')) {
  wire();
}
