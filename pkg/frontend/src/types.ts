/** Wire types shared with the backend HTTP API. */

export interface ArgSlotMeta {
  name: string;
  complete?: string; // schema kind for autocompletion
  choices?: string[]; // enumerated slots render as fixed choice lists
}

export interface OperatorMeta {
  name: string;
  category: string;
  args: ArgSlotMeta[];
  dependencies: string[]; // "E*" | "ENTITY_SET_WITH_FACTS" | "VALUE"
  output: string; // an output kind or "SAME_AS_INPUT"
}

export interface MetaResponse {
  health: string;
  stats: Record<string, number>;
  operators: OperatorMeta[];
  preview_k: number;
}

export interface ProgramNode {
  function: string;
  inputs: string[];
  dependencies: number[];
}

export interface TraceEntry {
  index: number;
  function: string;
  inputs: string[];
  kind: string;
  count: number;
  preview: string[];
  elapsed_us: number;
  warnings?: string[];
}

export interface RunResponse {
  answer: string;
  trace?: TraceEntry[];
}

export interface Diagnostic {
  node: number;
  severity: string;
  message: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  node_index?: number;
  diagnostics?: Diagnostic[];
}
