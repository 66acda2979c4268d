import { describe, expect, it } from "vitest";

import { CanvasGraph, isomorphic } from "../src/graph";
import type { OperatorMeta, ProgramNode } from "../src/types";

const OPERATORS: OperatorMeta[] = [
  { name: "FindAll", category: "query", args: [], dependencies: [], output: "ENTITY_SET" },
  { name: "Find", category: "query", args: [{ name: "name", complete: "entity" }], dependencies: [], output: "ENTITY_SET" },
  {
    name: "Relate",
    category: "query",
    args: [{ name: "relation", complete: "relation" }, { name: "direction", choices: ["forward", "backward"] }],
    dependencies: ["E*"],
    output: "ENTITY_SET_WITH_FACTS",
  },
  { name: "FilterConcept", category: "filter", args: [{ name: "concept", complete: "concept" }], dependencies: ["E*"], output: "SAME_AS_INPUT" },
  { name: "And", category: "set", args: [], dependencies: ["E*", "E*"], output: "ENTITY_SET" },
  { name: "Or", category: "set", args: [], dependencies: ["E*", "E*"], output: "ENTITY_SET" },
  { name: "Count", category: "query", args: [], dependencies: ["E*"], output: "INT" },
];

const FAULTY: ProgramNode[] = [
  { function: "Find", inputs: ["France"], dependencies: [] },
  { function: "Relate", inputs: ["shares border with", "backward"], dependencies: [0] },
  { function: "FilterConcept", inputs: ["country"], dependencies: [1] },
  { function: "Find", inputs: ["Germany"], dependencies: [] },
  { function: "Relate", inputs: ["statement is subject of", "forward"], dependencies: [3] },
  { function: "FilterConcept", inputs: ["country"], dependencies: [4] },
  { function: "Or", inputs: [], dependencies: [2, 5] },
  { function: "Count", inputs: [], dependencies: [6] },
];

function graph(): CanvasGraph {
  return new CanvasGraph(OPERATORS);
}

describe("canvas graph model", () => {
  it("round-trips program JSON up to isomorphism", () => {
    const a = graph();
    a.loadProgram(FAULTY);
    const b = graph();
    b.loadProgram(a.serialize().program);
    // positions differ from manual moves, ids differ from fresh counters
    for (const node of b.nodes.values()) {
      node.x += 500;
      node.y += 100;
    }
    expect(isomorphic(a, b)).toBe(true);
    expect(b.serialize().program).toEqual(FAULTY);
  });

  it("serializes via topological numbering with forward references resolved", () => {
    const g = graph();
    const count = g.addNode("Count");
    const all = g.addNode("FindAll");
    g.connect(all.id, count.id, 0);
    const { program } = g.serialize();
    expect(program).toEqual([
      { function: "FindAll", inputs: [], dependencies: [] },
      { function: "Count", inputs: [], dependencies: [0] },
    ]);
  });

  it("lays the tree out leaves-left root-right, y by leaf order", () => {
    const g = graph();
    g.loadProgram(FAULTY);
    const byOp = (op: string) =>
      [...g.nodes.values()].filter((n) => n.op === op);
    const finds = byOp("Find");
    const count = byOp("Count")[0];
    const or = byOp("Or")[0];
    for (const find of finds) {
      expect(find.x).toBeLessThan(or.x);
    }
    expect(or.x).toBeLessThan(count.x);
    // the two Find leaves occupy distinct rows
    expect(finds[0].y).not.toBe(finds[1].y);
  });

  it("deleting a node removes its edges", () => {
    const g = graph();
    const ids = g.loadProgram(FAULTY);
    g.deleteNode(ids[6]); // Or
    expect(g.nodes.size).toBe(7);
    expect(g.edges.every((e) => e.from !== ids[6] && e.to !== ids[6])).toBe(true);
    // Count lost its input; the two FilterConcepts became extra roots
    expect(g.rootCandidates().length).toBe(3);
  });

  it("connect replaces the edge on an occupied port and rejects self loops", () => {
    const g = graph();
    const a = g.addNode("FindAll");
    const b = g.addNode("Find");
    const joined = g.addNode("And");
    g.connect(a.id, joined.id, 0);
    g.connect(b.id, joined.id, 0);
    expect(g.dependenciesOf(joined.id)).toEqual([b.id, null]);
    expect(() => g.connect(joined.id, joined.id, 1)).toThrow();
    expect(() => g.connect(a.id, joined.id, 5)).toThrow();
  });

  it("reports arity problems for unfilled ports and empty slots", () => {
    const g = graph();
    expect(g.arityProblems()).toHaveLength(1); // empty canvas
    const find = g.addNode("Find");
    const relate = g.addNode("Relate");
    const problems = g.arityProblems();
    const messages = problems.map((p) => p.message).join("\n");
    expect(messages).toContain('argument "name" is empty');
    expect(messages).toContain("dependency 1 is not connected");
    expect(messages).toContain("single root");
    g.setSlot(find.id, 0, "Germany");
    g.setSlot(relate.id, 0, "shares border with");
    g.setSlot(relate.id, 1, "forward");
    g.connect(find.id, relate.id, 0);
    expect(g.arityProblems()).toEqual([]);
  });

  it("flags cycles instead of serializing them", () => {
    const g = graph();
    const a = g.addNode("Relate");
    const b = g.addNode("Relate");
    g.connect(a.id, b.id, 0);
    g.connect(b.id, a.id, 0);
    expect(g.topologicalOrder()).toBeNull();
    expect(() => g.serialize()).toThrow();
    expect(g.arityProblems().some((p) => p.message.includes("cycle"))).toBe(true);
  });

  it("tracks the dirty flag across edits and loads", () => {
    const g = graph();
    g.loadProgram(FAULTY);
    expect(g.dirty).toBe(false);
    g.setSlot([...g.nodes.keys()][0], 0, "Belgium");
    expect(g.dirty).toBe(true);
    g.loadProgram(FAULTY);
    expect(g.dirty).toBe(false);
  });

  it("maps trace entries back onto canvas nodes", () => {
    const g = graph();
    const ids = g.loadProgram(FAULTY.slice(0, 2).map((n, i) => ({ ...n, dependencies: i ? [0] : [] })));
    const { byIndex } = g.serialize();
    g.applyTrace(
      [
        { index: 0, function: "Find", inputs: ["France"], kind: "ENTITY_SET", count: 1, preview: ["France"], elapsed_us: 10 },
        { index: 1, function: "Relate", inputs: [], kind: "ENTITY_SET_WITH_FACTS", count: 5, preview: ["Germany"], elapsed_us: 20 },
      ],
      byIndex,
    );
    expect(g.nodes.get(ids[0])!.trace!.count).toBe(1);
    expect(g.nodes.get(ids[1])!.trace!.preview).toEqual(["Germany"]);
  });
});
