// Typed client for the rulewb HTTP API. The UI never recomputes counts:
// every number shown comes from a field in one of these responses.

export interface DatasetStats {
  n: number;
  attributes: number;
  distinct_items: number;
  values: Record<string, number[]>;
}

export interface ConceptNode {
  name: string;
  parents: string[];
  kind: 'leaf' | 'generalized' | 'defined';
}

export interface RuleRow {
  antecedent: string;
  consequent: string;
  support: number;
  confidence: number;
  count_xy: number;
  count_x: number;
  n: number;
}

export interface RulePage {
  total: number;
  offset: number;
  limit: number;
  sort: string;
  rules: RuleRow[];
}

export interface LogEntry {
  seq: number;
  op: { kind: string; schema: string; scope: string | null };
  mode: string;
  before_count: number;
  after_count: number;
  result_count: number;
  result_name: string | null;
}

export interface ApplyResponse {
  entry: LogEntry;
  result: string;
  working_count: number;
}

export interface SchemaInfo {
  name: string;
  text: string;
  implicative: boolean;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  location?: [number, number | null] | string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

async function check<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let body: ApiErrorBody = { code: 'http_error', message: `HTTP ${resp.status}` };
    try {
      const parsed = await resp.json();
      if (parsed.error) body = parsed.error;
    } catch {
      // non-JSON error body; keep the fallback
    }
    throw new ApiError(resp.status, body);
  }
  return resp.json() as Promise<T>;
}

export class Client {
  constructor(private base: string = '') {}

  private url(path: string): string {
    return this.base + path;
  }

  private async postRaw<T>(path: string, body: string): Promise<T> {
    return check(await fetch(this.url(path), { method: 'POST', body }));
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    return check(
      await fetch(this.url(path), {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      }),
    );
  }

  private async get<T>(path: string): Promise<T> {
    return check(await fetch(this.url(path)));
  }

  health(): Promise<{ status: string }> {
    return this.get('/healthz');
  }

  uploadDataset(csv: string): Promise<{ id: string; stats: DatasetStats }> {
    return this.postRaw('/datasets', csv);
  }

  uploadOntology(doc: string): Promise<{ id: string; concepts: number }> {
    return this.postRaw('/ontologies', doc);
  }

  uploadRules(text: string, datasetId: string): Promise<{ ruleset: string; count: number }> {
    return this.postRaw(`/rulesets?dataset=${encodeURIComponent(datasetId)}`, text);
  }

  mine(datasetId: string, params: {
    min_sup: string; max_sup: string; min_conf: string; max_consequent_len: number;
  }): Promise<{ ruleset: string; count: number }> {
    return this.postJson('/mine', { dataset: datasetId, ...params });
  }

  concepts(ontologyId: string): Promise<{ concepts: ConceptNode[] }> {
    return this.get(`/ontologies/${ontologyId}/concepts`);
  }

  extension(ontologyId: string, expr: string, datasetId?: string):
      Promise<{ items: string[]; count: number }> {
    let path = `/ontologies/${ontologyId}/extension?expr=${encodeURIComponent(expr)}`;
    if (datasetId) path += `&dataset=${encodeURIComponent(datasetId)}`;
    return this.get(path);
  }

  createSession(rulesetId: string, ontologyId: string, datasetId: string):
      Promise<{ id: string; working_count: number }> {
    return this.postJson('/sessions', {
      ruleset: rulesetId, ontology: ontologyId, dataset: datasetId,
    });
  }

  addSchemas(sessionId: string, script: string): Promise<{ schemas: SchemaInfo[] }> {
    return this.postJson(`/sessions/${sessionId}/schemas`, { script });
  }

  apply(sessionId: string, op: string, schema: string, scope?: string, mode?: string):
      Promise<ApplyResponse> {
    return this.postJson(`/sessions/${sessionId}/apply`, {
      op, schema, scope: scope ?? null, mode: mode ?? 'any',
    });
  }

  undo(sessionId: string):
      Promise<{ working_count: number; log_length: number; results: string[] }> {
    return this.postJson(`/sessions/${sessionId}/undo`, {});
  }

  log(sessionId: string):
      Promise<{ log: LogEntry[]; working_count: number; original_count: number }> {
    return this.get(`/sessions/${sessionId}/log`);
  }

  ruleset(id: string, offset = 0, limit = 50, sort = 'canonical'): Promise<RulePage> {
    return this.get(`/rulesets/${id}?offset=${offset}&limit=${limit}&sort=${sort}`);
  }

  result(id: string, offset = 0, limit = 50, sort = 'confidence'): Promise<RulePage> {
    return this.get(`/results/${id}?offset=${offset}&limit=${limit}&sort=${sort}`);
  }

  reportUrl(sessionId: string, format: 'json' | 'csv'): string {
    return this.url(`/sessions/${sessionId}/report?format=${format}`);
  }
}
