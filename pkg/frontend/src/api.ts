// Client for the service's /api/v1 endpoints. Every non-2xx response is a
// structured {code, message, subject} envelope and surfaces as ApiError.

import type {
  CheckReport,
  ErrorEnvelope,
  MappingJson,
  ModelDocument,
  SessionView,
  SolveReport,
  TreeJson,
} from './types';

export interface HttpResponse {
  status: number;
  text: string;
  contentType: string;
}

export interface Transport {
  request(method: string, path: string, body?: unknown): Promise<HttpResponse>;
}

export class FetchTransport implements Transport {
  constructor(private readonly baseUrl: string) {}

  async request(method: string, path: string, body?: unknown): Promise<HttpResponse> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return {
      status: response.status,
      text: await response.text(),
      contentType: response.headers.get('content-type') ?? '',
    };
  }
}

export class ApiError extends Error {
  constructor(
    readonly envelope: ErrorEnvelope,
    readonly status: number,
  ) {
    super(`${envelope.code}: ${envelope.message}`);
  }
}

function parseEnvelope(response: HttpResponse): ErrorEnvelope {
  try {
    const body = JSON.parse(response.text) as Partial<ErrorEnvelope>;
    if (typeof body.code === 'string' && typeof body.message === 'string') {
      return { code: body.code, message: body.message, subject: body.subject ?? null };
    }
  } catch {
    // fall through to the generic envelope
  }
  return { code: `Http${response.status}`, message: response.text.slice(0, 200), subject: null };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.transport.request(method, path, body);
    if (response.status < 200 || response.status >= 300) {
      throw new ApiError(parseEnvelope(response), response.status);
    }
    if (response.contentType.includes('text/plain')) {
      return response.text as unknown as T;
    }
    return JSON.parse(response.text) as T;
  }

  getTree(): Promise<TreeJson> {
    return this.call('GET', '/api/v1/omt/tree');
  }

  getMappings(): Promise<MappingJson[]> {
    return this.call('GET', '/api/v1/mappings');
  }

  createSession(name?: string): Promise<SessionView> {
    return this.call('POST', '/api/v1/sessions', name === undefined ? {} : { name });
  }

  getSession(id: string): Promise<SessionView> {
    return this.call('GET', `/api/v1/sessions/${id}`);
  }

  declareVariable(
    id: string,
    payload: { name: string; kind: string; lower?: unknown; upper?: unknown },
  ): Promise<SessionView> {
    return this.call('POST', `/api/v1/sessions/${id}/variables`, payload);
  }

  answer(id: string, answer: string): Promise<SessionView> {
    return this.call('POST', `/api/v1/sessions/${id}/answers`, { answer });
  }

  attachConstraint(
    id: string,
    payload: { leaf: number; bindings: Record<string, unknown>; label?: string },
  ): Promise<SessionView> {
    return this.call('POST', `/api/v1/sessions/${id}/constraints`, payload);
  }

  attachImplicit(
    id: string,
    payload: { mapping: string; params: Record<string, unknown> },
  ): Promise<SessionView> {
    return this.call('POST', `/api/v1/sessions/${id}/implicit`, payload);
  }

  setObjective(
    id: string,
    payload: { direction: 'min' | 'max'; expr: unknown },
  ): Promise<SessionView> {
    return this.call('POST', `/api/v1/sessions/${id}/objective`, payload);
  }

  /** Raw text alongside the parsed document, for byte-exact exports. */
  async getModelDocument(id: string): Promise<{ document: ModelDocument; raw: string }> {
    const response = await this.transport.request('GET', `/api/v1/sessions/${id}/model`);
    if (response.status !== 200) {
      throw new ApiError(parseEnvelope(response), response.status);
    }
    return { document: JSON.parse(response.text) as ModelDocument, raw: response.text };
  }

  compile(model: ModelDocument, format: 'lp' | 'mps', ifThenStrength?: 'weak' | 'strong'): Promise<string> {
    return this.call('POST', '/api/v1/models/compile', {
      model,
      format,
      ...(ifThenStrength ? { if_then_strength: ifThenStrength } : {}),
    });
  }

  solve(model: ModelDocument, maxPoints?: number): Promise<SolveReport> {
    return this.call('POST', '/api/v1/models/solve', {
      model,
      ...(maxPoints ? { limits: { max_points: maxPoints } } : {}),
    });
  }

  check(model: ModelDocument, cap?: number): Promise<CheckReport> {
    return this.call('POST', '/api/v1/models/check', {
      model,
      ...(cap ? { box: { cap } } : {}),
    });
  }
}
