// Minimal scripted transport for engine unit tests: canned responses per
// route, plus a call log so tests can assert that invalid input never
// reaches the server.

import type { HttpResponse, Transport } from '../src/api';
import type { ModelDocument, SessionView, TemplateJson, TreeJson } from '../src/types';

export interface LoggedCall {
  method: string;
  path: string;
  body: unknown;
}

type Handler = (body: unknown) => { status: number; body: unknown };

export class FakeTransport implements Transport {
  calls: LoggedCall[] = [];
  private handlers = new Map<string, Handler>();

  on(method: string, path: string, handler: Handler): void {
    this.handlers.set(`${method} ${path}`, handler);
  }

  async request(method: string, path: string, body?: unknown): Promise<HttpResponse> {
    this.calls.push({ method, path, body });
    const handler = this.handlers.get(`${method} ${path}`);
    if (!handler) {
      return { status: 404, text: JSON.stringify({ code: 'NoRoute', message: path, subject: null }), contentType: 'application/json' };
    }
    const result = handler(body);
    const text = typeof result.body === 'string' ? result.body : JSON.stringify(result.body);
    const contentType = typeof result.body === 'string' ? 'text/plain' : 'application/json';
    return { status: result.status, text, contentType };
  }
}

export const MINI_TREE: TreeJson = {
  schema_version: '1',
  root: 100,
  nodes: [
    {
      id: 100,
      label: 'requirement',
      kind: 'internal',
      question: 'What does the business requirement describe?',
      children: [{ answer: 'a choice among yes/no options', child: 11 }],
      template: null,
      anchored: false,
    },
    {
      id: 11,
      label: 'set-packing',
      kind: 'leaf',
      question: null,
      children: [],
      template: packingTemplate(),
      anchored: true,
    },
  ],
};

export function packingTemplate(): TemplateJson {
  return {
    family: 'set_packing',
    fixed: { rhs: 1 },
    slots: [{ name: 'members', kind: 'variable-list' }],
  };
}

export function emptyModel(name = 'session-test'): ModelDocument {
  return { schema_version: '1', name, variables: [], objective: null, constraints: [] };
}

export function view(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: 'sid0',
    cursor: 100,
    node_kind: 'internal',
    question: MINI_TREE.nodes[0]!.question,
    answers: ['a choice among yes/no options'],
    template: null,
    history: [],
    model: emptyModel(),
    created_at: 0,
    updated_at: 0,
    ...overrides,
  };
}
