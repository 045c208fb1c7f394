// Wizard state machine. The engine never mutates model state locally: every
// mutation round-trips through the service, and the acknowledged session
// view *is* the new state. Client-side work is limited to input validation
// (a missing or malformed slot never reaches the server) and rendering.

import { ApiClient, ApiError } from './api';
import { parseExpr, parseRational } from './rational';
import type {
  CheckReport,
  ErrorEnvelope,
  ModelDocument,
  SessionView,
  SlotKind,
  SolveReport,
  TemplateJson,
  TreeJson,
} from './types';

export interface SlotDraft {
  value: string;
  error: string | null;
}

export interface WizardState {
  phase: 'loading' | 'ready' | 'failed';
  sessionId: string | null;
  tree: TreeJson | null;
  cursor: number;
  nodeKind: 'internal' | 'leaf';
  question: string | null;
  answers: string[];
  template: TemplateJson | null;
  drafts: Record<string, SlotDraft>;
  labelDraft: string;
  model: ModelDocument | null;
  lastSolve: SolveReport | null;
  lastCheck: CheckReport | null;
  lastCompile: { format: 'lp' | 'mps'; text: string } | null;
  banner: ErrorEnvelope | null;
  hint: string | null;
  busy: boolean;
}

type Listener = (state: WizardState) => void;

function freshState(): WizardState {
  return {
    phase: 'loading',
    sessionId: null,
    tree: null,
    cursor: -1,
    nodeKind: 'internal',
    question: null,
    answers: [],
    template: null,
    drafts: {},
    labelDraft: '',
    model: null,
    lastSolve: null,
    lastCheck: null,
    lastCompile: null,
    banner: null,
    hint: null,
    busy: false,
  };
}

export class WizardEngine {
  private state: WizardState = freshState();
  private listeners: Listener[] = [];

  constructor(
    private readonly client: ApiClient,
    private readonly options: { sessionName?: string } = {},
  ) {}

  getState(): WizardState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(update: Partial<WizardState>): void {
    this.state = { ...this.state, ...update };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Server view -> displayed state; nothing else touches the model. */
  private acceptView(view: SessionView, keepDrafts = false): void {
    this.emit({
      phase: 'ready',
      sessionId: view.id,
      cursor: view.cursor,
      nodeKind: view.node_kind,
      question: view.question,
      answers: view.answers ?? [],
      template: view.template,
      drafts: keepDrafts ? this.state.drafts : {},
      labelDraft: keepDrafts ? this.state.labelDraft : '',
      model: view.model,
      banner: null,
      hint: null,
      busy: false,
    });
  }

  private fail(error: unknown): void {
    const envelope: ErrorEnvelope =
      error instanceof ApiError
        ? error.envelope
        : { code: 'ClientError', message: String(error), subject: null };
    this.emit({ banner: envelope, busy: false });
  }

  async start(): Promise<void> {
    try {
      const tree = await this.client.getTree();
      this.emit({ tree });
      const view = await this.client.createSession(this.options.sessionName);
      this.acceptView(view);
    } catch (error) {
      this.fail(error);
      this.emit({ phase: 'failed' });
    }
  }

  async answer(label: string): Promise<void> {
    if (!this.state.sessionId) return;
    this.emit({ busy: true });
    try {
      this.acceptView(await this.client.answer(this.state.sessionId, label));
    } catch (error) {
      this.fail(error);
    }
  }

  async declareVariable(name: string, kind: string, lower?: string, upper?: string): Promise<void> {
    if (!this.state.sessionId) return;
    const payload: { name: string; kind: string; lower?: unknown; upper?: unknown } = {
      name: name.trim(),
      kind,
    };
    try {
      if (lower && lower.trim() !== '') payload.lower = parseRational(lower);
      if (upper && upper.trim() !== '') payload.upper = parseRational(upper);
    } catch (error) {
      this.emit({ banner: { code: 'BadInput', message: String(error), subject: name } });
      return;
    }
    this.emit({ busy: true });
    try {
      this.acceptView(await this.client.declareVariable(this.state.sessionId, payload));
    } catch (error) {
      this.fail(error);
    }
  }

  setSlotDraft(slot: string, value: string): void {
    this.emit({
      drafts: { ...this.state.drafts, [slot]: { value, error: null } },
    });
  }

  setLabelDraft(value: string): void {
    this.emit({ labelDraft: value });
  }

  private declaredIds(): Set<string> {
    return new Set((this.state.model?.variables ?? []).map((v) => v.id));
  }

  private validateSlot(kind: SlotKind, raw: string): { value?: unknown; error?: string } {
    const text = raw.trim();
    if (text === '') return { error: 'required' };
    const known = this.declaredIds();
    try {
      switch (kind) {
        case 'variable': {
          if (!known.has(text)) return { error: `unknown variable "${text}"` };
          return { value: text };
        }
        case 'variable-list': {
          const names = text.split(/[\s,]+/).filter((t) => t !== '');
          if (names.length === 0) return { error: 'required' };
          for (const name of names) {
            if (!known.has(name)) return { error: `unknown variable "${name}"` };
          }
          return { value: names };
        }
        case 'expression':
          return { value: parseExpr(text, known) };
        case 'rational':
          return { value: parseRational(text) };
        case 'positive-integer': {
          if (!/^\d+$/.test(text) || parseInt(text, 10) < 1) {
            return { error: 'needs a positive integer' };
          }
          return { value: parseInt(text, 10) };
        }
      }
    } catch (error) {
      return { error: error instanceof Error ? error.message : String(error) };
    }
  }

  /** Validate all slots; on any field error the server is never called and
   * the entered values stay in place. */
  async submitTemplate(): Promise<void> {
    const { template, sessionId } = this.state;
    if (!template || !sessionId) return;
    const bindings: Record<string, unknown> = {};
    const drafts: Record<string, SlotDraft> = {};
    let failed = false;
    for (const slot of template.slots) {
      const raw = this.state.drafts[slot.name]?.value ?? '';
      const outcome = this.validateSlot(slot.kind, raw);
      if (outcome.error !== undefined) {
        drafts[slot.name] = { value: raw, error: outcome.error };
        failed = true;
      } else {
        drafts[slot.name] = { value: raw, error: null };
        bindings[slot.name] = outcome.value;
      }
    }
    if (failed) {
      this.emit({ drafts });
      return;
    }
    this.emit({ busy: true });
    try {
      const view = await this.client.attachConstraint(sessionId, {
        leaf: this.state.cursor,
        bindings,
        label: this.state.labelDraft.trim(),
      });
      this.acceptView(view);
    } catch (error) {
      // server-side rejection: keep the entries so nothing is lost
      this.emit({ drafts, busy: false });
      this.fail(error);
    }
  }

  async applyImplicit(mapping: string, params: Record<string, unknown>): Promise<void> {
    if (!this.state.sessionId) return;
    this.emit({ busy: true });
    try {
      this.acceptView(await this.client.attachImplicit(this.state.sessionId, { mapping, params }));
    } catch (error) {
      this.fail(error);
    }
  }

  async setObjective(direction: 'min' | 'max', exprText: string): Promise<void> {
    if (!this.state.sessionId) return;
    let expr;
    try {
      expr = parseExpr(exprText, this.declaredIds());
    } catch (error) {
      this.emit({ banner: { code: 'BadInput', message: String(error), subject: 'objective' } });
      return;
    }
    this.emit({ busy: true });
    try {
      this.acceptView(await this.client.setObjective(this.state.sessionId, { direction, expr }));
    } catch (error) {
      this.fail(error);
    }
  }

  /** Solve/check need a model with variables and at least one constraint. */
  canRunActions(): boolean {
    const model = this.state.model;
    return !!model && model.variables.length > 0 && model.constraints.length > 0;
  }

  async solve(maxPoints?: number): Promise<void> {
    if (!this.state.model) return;
    if (!this.canRunActions()) {
      this.emit({ hint: 'declare variables and attach at least one constraint before solving' });
      return;
    }
    this.emit({ busy: true });
    try {
      const report = await this.client.solve(this.state.model, maxPoints);
      this.emit({ lastSolve: report, banner: null, busy: false });
    } catch (error) {
      this.fail(error);
    }
  }

  async check(cap?: number): Promise<void> {
    if (!this.state.model) return;
    if (!this.canRunActions()) {
      this.emit({ hint: 'declare variables and attach at least one constraint before checking' });
      return;
    }
    this.emit({ busy: true });
    try {
      const report = await this.client.check(this.state.model, cap);
      this.emit({ lastCheck: report, banner: null, busy: false });
    } catch (error) {
      this.fail(error);
    }
  }

  async compile(format: 'lp' | 'mps'): Promise<void> {
    if (!this.state.model) return;
    if (!this.canRunActions()) {
      this.emit({ hint: 'nothing to compile yet' });
      return;
    }
    this.emit({ busy: true });
    try {
      const text = await this.client.compile(this.state.model, format);
      this.emit({ lastCompile: { format, text }, banner: null, busy: false });
    } catch (error) {
      this.fail(error);
    }
  }

  /** Canonical document text offered for download (and replay goldens). */
  async exportModelDocument(): Promise<string> {
    if (!this.state.sessionId) throw new Error('no session');
    const { document } = await this.client.getModelDocument(this.state.sessionId);
    return JSON.stringify(document, null, 2) + '\n';
  }
}
