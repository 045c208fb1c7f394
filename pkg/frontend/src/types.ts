// Payload shapes of the /api/v1 contract.

export interface Rational {
  num: number;
  den: number;
}

export interface ExprJson {
  terms: Record<string, Rational>;
  constant: Rational;
}

export type SlotKind =
  | 'variable'
  | 'variable-list'
  | 'expression'
  | 'rational'
  | 'positive-integer';

export interface SlotSpec {
  name: string;
  kind: SlotKind;
}

export interface TemplateJson {
  family: string;
  fixed: Record<string, unknown>;
  slots: SlotSpec[];
}

export interface TreeChild {
  answer: string;
  child: number;
}

export interface TreeNodeJson {
  id: number;
  label: string;
  kind: 'internal' | 'leaf';
  question: string | null;
  children: TreeChild[];
  template: TemplateJson | null;
  anchored: boolean;
}

export interface TreeJson {
  schema_version: string;
  root: number;
  nodes: TreeNodeJson[];
}

export interface VariableJson {
  id: string;
  name: string;
  kind: 'binary' | 'integer' | 'continuous';
  lower: Rational | null;
  upper: Rational | null;
}

export interface ConstraintJson {
  id: string;
  family: string;
  label: string;
  omt_node: number | null;
  [field: string]: unknown;
}

export interface ObjectiveJson {
  direction: 'min' | 'max';
  expr: ExprJson;
}

export interface ModelDocument {
  schema_version: string;
  name: string;
  variables: VariableJson[];
  objective: ObjectiveJson | null;
  constraints: ConstraintJson[];
}

export interface HistoryEvent {
  kind: string;
  [field: string]: unknown;
}

export interface SessionView {
  id: string;
  cursor: number;
  node_kind: 'internal' | 'leaf';
  question: string | null;
  answers: string[] | null;
  template: TemplateJson | null;
  history: HistoryEvent[];
  model: ModelDocument;
  created_at: number;
  updated_at: number;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  subject: string | null;
}

export interface MappingJson {
  id: string;
  description: string;
  parameters: SlotSpec[];
  target_nodes: number[];
}

export interface SolveReport {
  status: 'optimal' | 'infeasible';
  value: Rational | null;
  witness: Record<string, Rational> | null;
  points_enumerated: number;
}

export interface MismatchJson {
  assignment: Record<string, Rational>;
  semantics: boolean;
  lowered: boolean;
}

export interface CheckConstraintReport {
  id: string;
  points_checked: number;
  mismatches: MismatchJson[];
}

export interface CheckReport {
  ok: boolean;
  points_checked: number;
  constraints: CheckConstraintReport[];
}
