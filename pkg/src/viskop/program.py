"""Program representation, the operator inventory, and structural/type validation.

A program is an ordered list of operator nodes; dependency edges must form a
tree (every non-root node consumed exactly once) and each dependency's output
kind must be acceptable to its consumer.  The wire format is a JSON list of
``{"function", "inputs", "dependencies"}`` objects; ``-1`` dependency entries
and empty lists both mean "none".
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum

COMPARATOR_CHOICES = ("=", "!=", "<", ">")
DIRECTION_CHOICES = ("forward", "backward")
BETWEEN_CHOICES = ("greater", "less")
AMONG_CHOICES = ("largest", "smallest")

# Internal physical operator produced by plan_merge; never part of the wire format.
FUSED_SCAN = "_IndexedScan"


class OutputKind(str, Enum):
    ENTITY_SET = "ENTITY_SET"
    ENTITY_SET_WITH_FACTS = "ENTITY_SET_WITH_FACTS"
    VALUE = "VALUE"
    STRING = "STRING"
    INT = "INT"
    BOOL = "BOOL"


E_ANY = frozenset({OutputKind.ENTITY_SET, OutputKind.ENTITY_SET_WITH_FACTS})
E_WITH_FACTS = frozenset({OutputKind.ENTITY_SET_WITH_FACTS})
VALUE_ONLY = frozenset({OutputKind.VALUE})

_DEP_LABELS = {E_ANY: "E*", E_WITH_FACTS: "ENTITY_SET_WITH_FACTS", VALUE_ONLY: "VALUE"}


@dataclass(frozen=True, slots=True)
class ArgSlot:
    """One argument slot: either schema-completed, an enumerated choice, or free text."""

    name: str
    complete: str | None = None  # schema kind for autocompletion
    choices: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {"name": self.name}
        if self.complete:
            out["complete"] = self.complete
        if self.choices:
            out["choices"] = list(self.choices)
        return out


@dataclass(frozen=True, slots=True)
class Signature:
    name: str
    category: str
    args: tuple[ArgSlot, ...]
    deps: tuple[frozenset[OutputKind], ...]
    output: OutputKind | None  # None: output kind follows the input kind

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "category": self.category,
            "args": [a.to_dict() for a in self.args],
            "dependencies": [_DEP_LABELS[d] for d in self.deps],
            "output": self.output.value if self.output else "SAME_AS_INPUT",
        }


def _sig(name, category, args, deps, output):
    return Signature(name, category, tuple(args), tuple(deps), output)


_OP = OutputKind
SIGNATURES: dict[str, Signature] = {
    s.name: s
    for s in [
        _sig("FindAll", "query", [], [], _OP.ENTITY_SET),
        _sig("Find", "query", [ArgSlot("name", complete="entity")], [], _OP.ENTITY_SET),
        _sig("QueryName", "query", [], [E_ANY], _OP.STRING),
        _sig("Count", "query", [], [E_ANY], _OP.INT),
        _sig("QueryAttr", "query", [ArgSlot("key", complete="attribute")], [E_ANY], _OP.VALUE),
        _sig(
            "QueryAttrUnderCondition",
            "query",
            [
                ArgSlot("key", complete="attribute"),
                ArgSlot("qualifier key", complete="qualifier"),
                ArgSlot("qualifier value"),
            ],
            [E_ANY],
            _OP.VALUE,
        ),
        _sig("QueryRelation", "query", [], [E_ANY, E_ANY], _OP.STRING),
        _sig(
            "QueryAttrQualifier",
            "query",
            [
                ArgSlot("key", complete="attribute"),
                ArgSlot("value"),
                ArgSlot("qualifier key", complete="qualifier"),
            ],
            [E_ANY],
            _OP.VALUE,
        ),
        _sig(
            "QueryRelationQualifier",
            "query",
            [ArgSlot("relation", complete="relation"), ArgSlot("qualifier key", complete="qualifier")],
            [E_ANY, E_ANY],
            _OP.VALUE,
        ),
        _sig(
            "Relate",
            "query",
            [ArgSlot("relation", complete="relation"), ArgSlot("direction", choices=DIRECTION_CHOICES)],
            [E_ANY],
            _OP.ENTITY_SET_WITH_FACTS,
        ),
        _sig("FilterConcept", "filter", [ArgSlot("concept", complete="concept")], [E_ANY], None),
        _sig(
            "FilterStr",
            "filter",
            [ArgSlot("key", complete="attribute"), ArgSlot("value")],
            [E_ANY],
            _OP.ENTITY_SET_WITH_FACTS,
        ),
        *[
            _sig(
                name,
                "filter",
                [
                    ArgSlot("key", complete="attribute"),
                    ArgSlot("value"),
                    ArgSlot("op", choices=COMPARATOR_CHOICES),
                ],
                [E_ANY],
                _OP.ENTITY_SET_WITH_FACTS,
            )
            for name in ("FilterNum", "FilterYear", "FilterDate")
        ],
        _sig(
            "QFilterStr",
            "filter",
            [ArgSlot("qualifier key", complete="qualifier"), ArgSlot("value")],
            [E_WITH_FACTS],
            _OP.ENTITY_SET_WITH_FACTS,
        ),
        *[
            _sig(
                name,
                "filter",
                [
                    ArgSlot("qualifier key", complete="qualifier"),
                    ArgSlot("value"),
                    ArgSlot("op", choices=COMPARATOR_CHOICES),
                ],
                [E_WITH_FACTS],
                _OP.ENTITY_SET_WITH_FACTS,
            )
            for name in ("QFilterNum", "QFilterYear", "QFilterDate")
        ],
        _sig("VerifyStr", "verification", [ArgSlot("value")], [VALUE_ONLY], _OP.BOOL),
        *[
            _sig(
                name,
                "verification",
                [ArgSlot("value"), ArgSlot("op", choices=COMPARATOR_CHOICES)],
                [VALUE_ONLY],
                _OP.BOOL,
            )
            for name in ("VerifyNum", "VerifyYear", "VerifyDate")
        ],
        _sig(
            "SelectBetween",
            "selection",
            [ArgSlot("key", complete="attribute"), ArgSlot("op", choices=BETWEEN_CHOICES)],
            [E_ANY, E_ANY],
            _OP.STRING,
        ),
        _sig(
            "SelectAmong",
            "selection",
            [ArgSlot("key", complete="attribute"), ArgSlot("op", choices=AMONG_CHOICES)],
            [E_ANY],
            _OP.STRING,
        ),
        _sig("And", "set", [], [E_ANY, E_ANY], _OP.ENTITY_SET),
        _sig("Or", "set", [], [E_ANY, E_ANY], _OP.ENTITY_SET),
    ]
}


@dataclass(frozen=True)
class OperatorNode:
    function: str
    inputs: tuple[str, ...]
    dependencies: tuple[int, ...]
    # Index of the node in the program it was parsed from; kept through plan
    # rewrites so traces and errors point at the node the author sees.
    origin: int | None = field(default=None, compare=False)
    # Logical operators a fused physical node stands for.
    fused: tuple["OperatorNode", ...] = ()


@dataclass(frozen=True)
class Program:
    nodes: tuple[OperatorNode, ...]

    @property
    def root(self) -> int | None:
        """The unique node not consumed by any other node, if unique."""
        consumed = set()
        for node in self.nodes:
            consumed.update(node.dependencies)
        roots = [i for i in range(len(self.nodes)) if i not in consumed]
        return roots[0] if len(roots) == 1 else None

    def __len__(self) -> int:
        return len(self.nodes)


class ProgramParseError(Exception):
    """The program document does not describe a well-formed node list."""


@dataclass(slots=True)
class Diagnostic:
    node: int
    severity: str  # "error" | "warning"
    message: str

    def to_dict(self) -> dict:
        return {"node": self.node, "severity": self.severity, "message": self.message}


@dataclass(slots=True)
class ValidationReport:
    ok: bool
    diagnostics: list[Diagnostic]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "diagnostics": [d.to_dict() for d in self.diagnostics]}


def parse_program(document) -> Program:
    """Parse the wire-format node list; normalizes dependencies (drops -1)."""
    if not isinstance(document, list):
        raise ProgramParseError("program document must be a list of nodes")
    if not document:
        raise ProgramParseError("empty program")
    nodes: list[OperatorNode] = []
    for i, raw in enumerate(document):
        if not isinstance(raw, dict):
            raise ProgramParseError(f"node {i}: not an object")
        function = raw.get("function")
        if function not in SIGNATURES:
            raise ProgramParseError(f"node {i}: unknown function {function!r}")
        inputs = raw.get("inputs", [])
        if not isinstance(inputs, list) or any(not isinstance(s, str) for s in inputs):
            raise ProgramParseError(f"node {i}: inputs must be a list of strings")
        raw_deps = raw.get("dependencies", [])
        if raw_deps is None:
            raw_deps = []
        if not isinstance(raw_deps, list) or any(not isinstance(d, int) or isinstance(d, bool) for d in raw_deps):
            raise ProgramParseError(f"node {i}: dependencies must be a list of integers")
        deps = []
        for dep in raw_deps:
            if dep == -1:
                continue
            if dep < 0 or dep >= len(document):
                raise ProgramParseError(f"node {i}: dependency index {dep} out of range")
            if dep == i:
                raise ProgramParseError(f"node {i}: depends on itself")
            deps.append(dep)
        nodes.append(OperatorNode(function=function, inputs=tuple(inputs), dependencies=tuple(deps), origin=i))
    return Program(nodes=tuple(nodes))


def serialize_program(program: Program) -> list[dict]:
    """Emit the normalized wire format (no -1 sentinels, explicit empty lists)."""
    out = []
    for node in program.nodes:
        if node.function not in SIGNATURES:
            raise ValueError(f"cannot serialize internal operator {node.function!r}")
        out.append(
            {
                "function": node.function,
                "inputs": list(node.inputs),
                "dependencies": list(node.dependencies),
            }
        )
    return out


def _toposort(program: Program) -> list[int] | None:
    """Topological order, smallest ready index first; None if cyclic."""
    n = len(program.nodes)
    indegree = [0] * n
    consumers: list[list[int]] = [[] for _ in range(n)]
    for i, node in enumerate(program.nodes):
        indegree[i] = len(node.dependencies)
        for dep in node.dependencies:
            consumers[dep].append(i)
    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for consumer in consumers[i]:
            indegree[consumer] -= 1
            if indegree[consumer] == 0:
                heapq.heappush(ready, consumer)
    return order if len(order) == n else None


def execution_order(program: Program) -> list[int]:
    """Deterministic evaluation order; for a valid program it ends at the root."""
    order = _toposort(program)
    if order is None:
        raise ValueError("program contains a dependency cycle")
    return order


def validate(program: Program) -> ValidationReport:
    """Structural checks (tree shape, arity) followed by dependency-kind checks.

    All violations are reported, not just the first.
    """
    diagnostics: list[Diagnostic] = []

    def error(node: int, message: str) -> None:
        diagnostics.append(Diagnostic(node=node, severity="error", message=message))

    n = len(program.nodes)
    if n == 0:
        return ValidationReport(ok=False, diagnostics=[Diagnostic(-1, "error", "empty program")])

    for i, node in enumerate(program.nodes):
        sig = SIGNATURES.get(node.function)
        if sig is None:
            error(i, f"unknown function {node.function!r}")
            continue
        if len(node.inputs) != len(sig.args):
            error(i, f"{node.function} takes {len(sig.args)} argument(s), got {len(node.inputs)}")
        if len(node.dependencies) != len(sig.deps):
            error(i, f"{node.function} takes {len(sig.deps)} dependency input(s), got {len(node.dependencies)}")
        for dep in node.dependencies:
            if dep < 0 or dep >= n:
                error(i, f"dependency index {dep} out of range")
            elif dep == i:
                error(i, "node depends on itself")

    consumed_by: dict[int, list[int]] = {}
    for i, node in enumerate(program.nodes):
        for dep in node.dependencies:
            if 0 <= dep < n and dep != i:
                consumed_by.setdefault(dep, []).append(i)
    for i, consumers in consumed_by.items():
        if len(consumers) > 1:
            error(i, f"node output consumed {len(consumers)} times; the dependency graph must be a tree")
    unconsumed = [i for i in range(n) if i not in consumed_by]
    if not unconsumed:
        error(n - 1, "no root: every node is consumed (dependency cycle)")
    elif len(unconsumed) > 1:
        root = unconsumed[-1]
        for orphan in unconsumed[:-1]:
            error(orphan, f"orphan node: its output is never used (program has no single root; see node {root})")

    order = _toposort(program)
    if order is None:
        error(n - 1, "dependency cycle detected")
    else:
        kinds: dict[int, OutputKind] = {}
        for i in order:
            node = program.nodes[i]
            sig = SIGNATURES.get(node.function)
            if sig is None:
                continue
            inferred: OutputKind | None = sig.output
            for slot, dep in enumerate(node.dependencies):
                if not (0 <= dep < n) or dep == i:
                    continue
                got = kinds.get(dep)
                if got is None:
                    continue
                expected = sig.deps[slot] if slot < len(sig.deps) else None
                if expected is not None and got not in expected:
                    error(
                        i,
                        f"dependency {slot} of {node.function}: {got.value} not acceptable, "
                        f"expected {_DEP_LABELS[expected]}",
                    )
                elif sig.output is None and slot == 0:
                    inferred = got
            if sig.output is None and inferred is None:
                inferred = OutputKind.ENTITY_SET  # assume narrowest after an upstream error
            kinds[i] = inferred

    ok = not any(d.severity == "error" for d in diagnostics)
    return ValidationReport(ok=ok, diagnostics=diagnostics)
