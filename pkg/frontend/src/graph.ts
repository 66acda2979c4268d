/** Canvas graph model: nodes with argument slots, typed dependency ports,
 * serialization to the wire format via topological numbering, and the
 * leaves-left / root-right tree layout. Pure data + logic, no DOM. */

import type { OperatorMeta, ProgramNode, TraceEntry } from "./types";

export interface NodeTrace {
  kind: string;
  count: number;
  preview: string[];
}

export interface CanvasNode {
  id: string;
  op: string;
  slots: string[];
  x: number;
  y: number;
  trace: NodeTrace | null;
  error: string | null;
}

/** `from`'s output feeds dependency port `port` of `to`. */
export interface CanvasEdge {
  from: string;
  to: string;
  port: number;
}

export interface ArityProblem {
  nodeId: string;
  message: string;
}

const X_SPACING = 190;
const Y_SPACING = 96;
const MARGIN = 24;

export class CanvasGraph {
  nodes = new Map<string, CanvasNode>();
  edges: CanvasEdge[] = [];
  dirty = false;
  private counter = 0;
  private meta: Map<string, OperatorMeta>;

  constructor(operators: OperatorMeta[]) {
    this.meta = new Map(operators.map((op) => [op.name, op]));
  }

  operator(name: string): OperatorMeta {
    const found = this.meta.get(name);
    if (!found) throw new Error(`unknown operator ${name}`);
    return found;
  }

  addNode(op: string, x = MARGIN, y = MARGIN): CanvasNode {
    this.operator(op);
    const node: CanvasNode = {
      id: `n${this.counter++}`,
      op,
      slots: this.operator(op).args.map(() => ""),
      x,
      y,
      trace: null,
      error: null,
    };
    this.nodes.set(node.id, node);
    this.dirty = true;
    return node;
  }

  deleteNode(id: string): void {
    if (!this.nodes.delete(id)) return;
    this.edges = this.edges.filter((e) => e.from !== id && e.to !== id);
    this.dirty = true;
  }

  /** Wire `from`'s output into `to`'s dependency port, replacing what was there. */
  connect(from: string, to: string, port: number): void {
    if (from === to) throw new Error("a node cannot depend on itself");
    const target = this.nodes.get(to);
    if (!this.nodes.has(from) || !target) throw new Error("edge endpoints must exist");
    const arity = this.operator(target.op).dependencies.length;
    if (port < 0 || port >= arity) throw new Error(`port ${port} out of range for ${target.op}`);
    this.edges = this.edges.filter((e) => !(e.to === to && e.port === port));
    this.edges.push({ from, to, port });
    this.dirty = true;
  }

  disconnect(to: string, port: number): void {
    this.edges = this.edges.filter((e) => !(e.to === to && e.port === port));
    this.dirty = true;
  }

  setSlot(id: string, index: number, value: string): void {
    const node = this.nodes.get(id);
    if (!node) return;
    node.slots[index] = value;
    this.dirty = true;
  }

  dependenciesOf(id: string): (string | null)[] {
    const node = this.nodes.get(id)!;
    const arity = this.operator(node.op).dependencies.length;
    const ports: (string | null)[] = Array(arity).fill(null);
    for (const edge of this.edges) {
      if (edge.to === id) ports[edge.port] = edge.from;
    }
    return ports;
  }

  consumersOf(id: string): string[] {
    return this.edges.filter((e) => e.from === id).map((e) => e.to);
  }

  /** Nodes whose output is not consumed anywhere. */
  rootCandidates(): string[] {
    const consumed = new Set(this.edges.map((e) => e.from));
    return [...this.nodes.keys()].filter((id) => !consumed.has(id));
  }

  /** Client-side pre-submission checks: every dependency port and every
   * argument slot filled, one root, no cycles. Kind legality stays with the
   * server. */
  arityProblems(): ArityProblem[] {
    const problems: ArityProblem[] = [];
    if (this.nodes.size === 0) {
      return [{ nodeId: "", message: "the canvas is empty" }];
    }
    for (const node of this.nodes.values()) {
      const ports = this.dependenciesOf(node.id);
      ports.forEach((filled, port) => {
        if (filled === null) {
          problems.push({ nodeId: node.id, message: `${node.op}: dependency ${port + 1} is not connected` });
        }
      });
      node.slots.forEach((value, index) => {
        if (!value.trim()) {
          const slot = this.operator(node.op).args[index];
          problems.push({ nodeId: node.id, message: `${node.op}: argument "${slot.name}" is empty` });
        }
      });
    }
    const roots = this.rootCandidates();
    if (roots.length === 0) {
      problems.push({ nodeId: "", message: "no root: the graph has a cycle" });
    } else if (roots.length > 1) {
      for (const id of roots) {
        problems.push({ nodeId: id, message: "unused output: the program must have a single root" });
      }
    }
    if (this.topologicalOrder() === null) {
      problems.push({ nodeId: "", message: "dependency cycle" });
    }
    return problems;
  }

  /** Insertion-ordered Kahn topological order, or null on a cycle. */
  topologicalOrder(): string[] | null {
    const pending = new Map<string, number>();
    for (const id of this.nodes.keys()) {
      pending.set(id, this.dependenciesOf(id).filter((d) => d !== null).length);
    }
    const order: string[] = [];
    const done = new Set<string>();
    let progressed = true;
    while (progressed && order.length < this.nodes.size) {
      progressed = false;
      for (const id of this.nodes.keys()) {
        if (done.has(id) || (pending.get(id) ?? 0) > 0) continue;
        order.push(id);
        done.add(id);
        for (const consumer of this.consumersOf(id)) {
          pending.set(consumer, (pending.get(consumer) ?? 0) - 1);
        }
        progressed = true;
      }
    }
    return order.length === this.nodes.size ? order : null;
  }

  /** Serialize to the wire format; also returns index -> node id mapping so
   * server diagnostics can be traced back to canvas nodes. */
  serialize(): { program: ProgramNode[]; byIndex: string[] } {
    const order = this.topologicalOrder();
    if (order === null) throw new Error("cannot serialize a cyclic graph");
    const indexOf = new Map(order.map((id, i) => [id, i]));
    const program = order.map((id) => {
      const node = this.nodes.get(id)!;
      return {
        function: node.op,
        inputs: [...node.slots],
        dependencies: this.dependenciesOf(id).map((dep) => indexOf.get(dep!)!),
      };
    });
    return { program, byIndex: order };
  }

  /** Replace the canvas with a parsed program, laid out as a tree. */
  loadProgram(program: ProgramNode[]): string[] {
    this.nodes.clear();
    this.edges = [];
    const ids = program.map((raw) => {
      const node = this.addNode(raw.function);
      node.slots = [...raw.inputs];
      return node.id;
    });
    program.forEach((raw, i) => {
      raw.dependencies.forEach((dep, port) => this.connect(ids[dep], ids[i], port));
    });
    this.layout();
    this.dirty = false;
    return ids;
  }

  /** Leaves left, root right: x by topological depth, y by leaf order. */
  layout(): void {
    const depth = new Map<string, number>();
    const order = this.topologicalOrder() ?? [...this.nodes.keys()];
    for (const id of order) {
      const deps = this.dependenciesOf(id).filter((d): d is string => d !== null);
      depth.set(id, deps.length ? Math.max(...deps.map((d) => (depth.get(d) ?? 0) + 1)) : 0);
    }
    let nextRow = 0;
    const row = new Map<string, number>();
    const place = (id: string): number => {
      if (row.has(id)) return row.get(id)!;
      const deps = this.dependenciesOf(id).filter((d): d is string => d !== null);
      const value = deps.length
        ? deps.map(place).reduce((a, b) => a + b, 0) / deps.length
        : nextRow++;
      row.set(id, value);
      return value;
    };
    const roots = this.rootCandidates();
    for (const id of roots.length ? roots : order) place(id);
    for (const id of order) place(id); // disconnected leftovers
    for (const [id, node] of this.nodes) {
      node.x = MARGIN + (depth.get(id) ?? 0) * X_SPACING;
      node.y = MARGIN + (row.get(id) ?? 0) * Y_SPACING;
    }
  }

  applyTrace(entries: TraceEntry[], byIndex: string[]): void {
    for (const node of this.nodes.values()) {
      node.trace = null;
      node.error = null;
    }
    for (const entry of entries) {
      const id = byIndex[entry.index];
      const node = id ? this.nodes.get(id) : undefined;
      if (node) node.trace = { kind: entry.kind, count: entry.count, preview: entry.preview };
    }
  }

  clearMarks(): void {
    for (const node of this.nodes.values()) node.error = null;
  }
}

/** Two graphs describe the same program, ignoring positions and node ids. */
export function isomorphic(a: CanvasGraph, b: CanvasGraph): boolean {
  try {
    const pa = a.serialize().program;
    const pb = b.serialize().program;
    return JSON.stringify(pa) === JSON.stringify(pb);
  } catch {
    return false;
  }
}
