"""Program execution over the KB and its indices, with fusion and trace capture.

``plan_merge`` rewrites each FindAll followed by a chain of filter operators
into one fused physical node that answers from the inverted indices, so those
chains never enumerate the whole entity store.  The fused node still emits one
trace entry per logical operator, and trace/error node indices always refer to
the program as the author wrote it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping

from .indexes import IndexSet, lookup_attribute
from .kb import FORWARD, BACKWARD, Fact, KnowledgeBase
from .program import (
    FUSED_SCAN,
    OperatorNode,
    OutputKind,
    Program,
    SIGNATURES,
    execution_order,
)
from .values import (
    LiteralParseError,
    ValueKind,
    ValueLiteral,
    compare_values,
    parse_date,
    parse_quantity,
    parse_year,
    render_value,
    string_value,
    try_parse_literal,
)

DEFAULT_PREVIEW_K = 100

_FILTER_ARG_KINDS = {
    "FilterStr": ValueKind.STRING,
    "FilterNum": ValueKind.QUANTITY,
    "FilterYear": ValueKind.YEAR,
    "FilterDate": ValueKind.DATE,
}
_QFILTER_ARG_KINDS = {
    "QFilterStr": ValueKind.STRING,
    "QFilterNum": ValueKind.QUANTITY,
    "QFilterYear": ValueKind.YEAR,
    "QFilterDate": ValueKind.DATE,
}
_VERIFY_ARG_KINDS = {
    "VerifyStr": ValueKind.STRING,
    "VerifyNum": ValueKind.QUANTITY,
    "VerifyYear": ValueKind.YEAR,
    "VerifyDate": ValueKind.DATE,
}
_FUSABLE = set(_FILTER_ARG_KINDS) | {"FilterConcept"}


class ExecutionError(Exception):
    """Runtime failure attributed to one program node, for front-end highlighting."""

    def __init__(self, node_index: int, code: str, message: str) -> None:
        super().__init__(message)
        self.node_index = node_index
        self.code = code
        self.message = message


@dataclass(frozen=True, slots=True)
class EntitySetValue:
    ids: tuple[str, ...]  # ascending, duplicate-free
    bindings: Mapping[str, tuple[Fact, ...]] | None = None

    @property
    def kind(self) -> OutputKind:
        return OutputKind.ENTITY_SET if self.bindings is None else OutputKind.ENTITY_SET_WITH_FACTS


@dataclass(frozen=True, slots=True)
class LiteralListValue:
    values: tuple[ValueLiteral, ...]
    kind: OutputKind = OutputKind.VALUE


@dataclass(frozen=True, slots=True)
class StringListValue:
    strings: tuple[str, ...]
    kind: OutputKind = OutputKind.STRING


@dataclass(frozen=True, slots=True)
class IntValue:
    number: int
    kind: OutputKind = OutputKind.INT


@dataclass(frozen=True, slots=True)
class BoolValue:
    flag: bool
    kind: OutputKind = OutputKind.BOOL


RuntimeValue = EntitySetValue | LiteralListValue | StringListValue | IntValue | BoolValue


def cardinality(value: RuntimeValue) -> int:
    if isinstance(value, EntitySetValue):
        return len(value.ids)
    if isinstance(value, LiteralListValue):
        return len(value.values)
    if isinstance(value, StringListValue):
        return len(value.strings)
    return 1


def preview_items(kb: KnowledgeBase, value: RuntimeValue, limit: int) -> list[str]:
    """First `limit` items of the value's deterministic rendering."""
    if isinstance(value, EntitySetValue):
        return [kb.entities[eid].name for eid in value.ids[:limit]]
    if isinstance(value, LiteralListValue):
        return [render_value(v) for v in value.values[:limit]]
    if isinstance(value, StringListValue):
        return list(value.strings[:limit])
    if isinstance(value, IntValue):
        return [str(value.number)]
    return ["Yes" if value.flag else "No"]


def render_answer(kb: KnowledgeBase, value: RuntimeValue) -> str:
    """Answer utterance for a root value; empty collections render "no answer"."""
    if isinstance(value, BoolValue):
        return "Yes" if value.flag else "No"
    if isinstance(value, IntValue):
        return str(value.number)
    if isinstance(value, LiteralListValue):
        items = [render_value(v) for v in value.values]
    elif isinstance(value, StringListValue):
        items = list(value.strings)
    else:
        items = [kb.entities[eid].name for eid in value.ids]
    return "; ".join(items) if items else "no answer"


@dataclass(slots=True)
class TraceEntry:
    index: int
    function: str
    inputs: tuple[str, ...]
    kind: str
    count: int
    preview: list[str]
    elapsed_us: int
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "index": self.index,
            "function": self.function,
            "inputs": list(self.inputs),
            "kind": self.kind,
            "count": self.count,
            "preview": self.preview,
            "elapsed_us": self.elapsed_us,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


@dataclass(slots=True)
class ExecutionResult:
    answer: str
    trace: list[TraceEntry] | None
    root_kind: OutputKind


def plan_merge(program: Program) -> Program:
    """Fuse every FindAll -> filter-operator chain into one index-backed node.

    Semantics are preserved; the fused node keeps the chain's logical nodes so
    the trace still reports each of them.  Only valid (tree-shaped) programs
    should be submitted here.
    """
    n = len(program.nodes)
    consumer: dict[int, int] = {}
    for i, node in enumerate(program.nodes):
        for dep in node.dependencies:
            consumer[dep] = i

    chain_of: dict[int, list[int]] = {}  # chain head -> member indices
    member_of: dict[int, int] = {}  # member -> chain head
    for i, node in enumerate(program.nodes):
        if node.function != "FindAll":
            continue
        chain = [i]
        tail = i
        while True:
            nxt = consumer.get(tail)
            if nxt is None:
                break
            nxt_node = program.nodes[nxt]
            if nxt_node.function not in _FUSABLE or nxt_node.dependencies != (tail,):
                break
            chain.append(nxt)
            tail = nxt
        if len(chain) > 1:
            chain_of[i] = chain
            for member in chain:
                member_of[member] = i

    if not chain_of:
        return program

    new_nodes: list[OperatorNode] = []
    new_index: dict[int, int] = {}
    for i, node in enumerate(program.nodes):
        head = member_of.get(i)
        if head is not None:
            if i == head:
                new_index[i] = len(new_nodes)
                new_nodes.append(None)  # placeholder; fused node built below
            else:
                new_index[i] = new_index[head]
            continue
        new_index[i] = len(new_nodes)
        new_nodes.append(node)

    for head, chain in chain_of.items():
        fused = OperatorNode(
            function=FUSED_SCAN,
            inputs=(),
            dependencies=(),
            origin=program.nodes[head].origin,
            fused=tuple(program.nodes[j] for j in chain),
        )
        new_nodes[new_index[head]] = fused

    remapped: list[OperatorNode] = []
    for node in new_nodes:
        if node.function == FUSED_SCAN or not node.dependencies:
            remapped.append(node)
        else:
            remapped.append(
                OperatorNode(
                    function=node.function,
                    inputs=node.inputs,
                    dependencies=tuple(new_index[d] for d in node.dependencies),
                    origin=node.origin,
                    fused=node.fused,
                )
            )
    return Program(nodes=tuple(remapped))


def execute(
    kb: KnowledgeBase,
    idx: IndexSet,
    program: Program,
    trace: bool = False,
    preview_k: int = DEFAULT_PREVIEW_K,
) -> ExecutionResult:
    """Evaluate a validated program; collects per-operator entries when `trace` is set."""
    return _Evaluator(kb, idx, trace, preview_k).run(program)


class _Evaluator:
    def __init__(self, kb: KnowledgeBase, idx: IndexSet, want_trace: bool, preview_k: int) -> None:
        self.kb = kb
        self.idx = idx
        self.want_trace = want_trace
        self.preview_k = preview_k
        self.entries: list[TraceEntry] = []
        self._warnings: list[str] = []

    def run(self, program: Program) -> ExecutionResult:
        values: dict[int, RuntimeValue] = {}
        order = execution_order(program)
        for i in order:
            node = program.nodes[i]
            origin = node.origin if node.origin is not None else i
            if node.function == FUSED_SCAN:
                values[i] = self._eval_fused(node)
                continue
            deps = [values[d] for d in node.dependencies]
            self._warnings = []
            started = time.perf_counter_ns()
            try:
                value = self._dispatch(node, origin, deps)
            except LiteralParseError as exc:
                raise ExecutionError(origin, "bad_literal", str(exc)) from None
            elapsed = (time.perf_counter_ns() - started) // 1000
            if self.want_trace:
                self._record(origin, node.function, node.inputs, value, elapsed, tuple(self._warnings))
            values[i] = value
        root = order[-1]
        root_value = values[root]
        return ExecutionResult(
            answer=render_answer(self.kb, root_value),
            trace=self.entries if self.want_trace else None,
            root_kind=root_value.kind,
        )

    def _record(self, origin, function, inputs, value: RuntimeValue, elapsed_us, warnings=()) -> None:
        self.entries.append(
            TraceEntry(
                index=origin,
                function=function,
                inputs=inputs,
                kind=value.kind.value,
                count=cardinality(value),
                preview=preview_items(self.kb, value, self.preview_k),
                elapsed_us=elapsed_us,
                warnings=warnings,
            )
        )

    def _dispatch(self, node: OperatorNode, origin: int, deps: list[RuntimeValue]) -> RuntimeValue:
        fn = node.function
        sig = SIGNATURES.get(fn)
        if sig is None:
            raise ExecutionError(origin, "invalid_program", f"unknown function {fn!r}")
        if len(node.inputs) != len(sig.args) or len(deps) != len(sig.deps):
            raise ExecutionError(origin, "invalid_program", f"{fn}: arity mismatch (program not validated?)")
        handler = getattr(self, "_eval_" + fn.lower(), None)
        if handler is None:
            raise ExecutionError(origin, "invalid_program", f"no evaluator for {fn}")
        return handler(node, origin, deps)

    # -- query -----------------------------------------------------------

    def _eval_findall(self, node, origin, deps) -> EntitySetValue:
        return EntitySetValue(ids=self.kb.sorted_entity_ids)

    def _eval_find(self, node, origin, deps) -> EntitySetValue:
        name = node.inputs[0]
        ids = self.idx.name_index.get(name)
        if not ids:
            raise ExecutionError(origin, "unknown_entity", f"unknown entity name '{name}'")
        return EntitySetValue(ids=ids)

    def _eval_queryname(self, node, origin, deps) -> StringListValue:
        ids = deps[0].ids
        return StringListValue(strings=tuple(self.kb.entities[eid].name for eid in ids))

    def _eval_count(self, node, origin, deps) -> IntValue:
        return IntValue(number=len(deps[0].ids))

    def _require_entities(self, value: EntitySetValue, origin: int, what: str) -> tuple[str, ...]:
        if not value.ids:
            raise ExecutionError(origin, "empty_input", f"{what} received an empty entity set")
        return value.ids

    def _eval_queryattr(self, node, origin, deps) -> LiteralListValue:
        key = node.inputs[0]
        ids = self._require_entities(deps[0], origin, "QueryAttr")
        values = []
        for eid in ids:
            for fact in self.kb.entities[eid].facts_by_key.get(key, ()):
                values.append(fact.value)
        return LiteralListValue(values=tuple(values))

    def _eval_queryattrundercondition(self, node, origin, deps) -> LiteralListValue:
        key, qkey, qvalue = node.inputs
        ids = self._require_entities(deps[0], origin, "QueryAttrUnderCondition")
        values = []
        for eid in ids:
            for fact in self.kb.entities[eid].facts_by_key.get(key, ()):
                if any(render_value(q) == qvalue for q in fact.qualifiers.get(qkey, ())):
                    values.append(fact.value)
        return LiteralListValue(values=tuple(values))

    def _first_of_side(self, value: EntitySetValue, origin: int, fn: str, side: str) -> str:
        ids = self._require_entities(value, origin, f"{fn} ({side} side)")
        if len(ids) > 1:
            self._warnings.append(f"{side} side has {len(ids)} entities; using the first ({ids[0]})")
        return ids[0]

    def _eval_queryrelation(self, node, origin, deps) -> StringListValue:
        a = self._first_of_side(deps[0], origin, "QueryRelation", "left")
        b = self._first_of_side(deps[1], origin, "QueryRelation", "right")
        relations = sorted(
            {
                rf.relation
                for rf in self.kb.entities[a].relational_facts
                if rf.direction == FORWARD and rf.object == b
            }
        )
        return StringListValue(strings=tuple(relations))

    def _eval_queryattrqualifier(self, node, origin, deps) -> LiteralListValue:
        key, value_text, qkey = node.inputs
        ids = self._require_entities(deps[0], origin, "QueryAttrQualifier")
        collected = []
        matched = False
        for eid in ids:
            for fact in self.kb.entities[eid].facts_by_key.get(key, ()):
                target = try_parse_literal(value_text, fact.value.kind)
                if target is not None and compare_values(fact.value, "=", target):
                    matched = True
                    collected.extend(fact.qualifiers.get(qkey, ()))
        if not matched:
            raise ExecutionError(
                origin, "no_fact", f"no literal fact with key '{key}' and value '{value_text}' found"
            )
        return LiteralListValue(values=tuple(collected))

    def _eval_queryrelationqualifier(self, node, origin, deps) -> LiteralListValue:
        relation, qkey = node.inputs
        a = self._first_of_side(deps[0], origin, "QueryRelationQualifier", "left")
        b = self._first_of_side(deps[1], origin, "QueryRelationQualifier", "right")
        if relation not in self.kb.relation_names:
            raise ExecutionError(origin, "unknown_relation", f"unknown relation '{relation}'")
        facts = [
            rf
            for rf in self.kb.entities[a].relational_facts
            if rf.relation == relation and rf.direction == FORWARD and rf.object == b
        ]
        if not facts:
            raise ExecutionError(
                origin, "no_fact", f"no fact ({a}, {relation}, {b}) found"
            )
        collected = []
        for rf in facts:
            collected.extend(rf.qualifiers.get(qkey, ()))
        return LiteralListValue(values=tuple(collected))

    def _eval_relate(self, node, origin, deps) -> EntitySetValue:
        relation, direction = node.inputs
        if direction not in (FORWARD, BACKWARD):
            raise ExecutionError(origin, "bad_literal", f"direction must be forward or backward, got '{direction}'")
        if relation not in self.kb.relation_names:
            raise ExecutionError(origin, "unknown_relation", f"unknown relation '{relation}'")
        reached: dict[str, list[Fact]] = {}
        for eid in deps[0].ids:
            for rf in self.kb.entities[eid].relational_facts:
                if rf.relation == relation and rf.direction == direction:
                    reached.setdefault(rf.object, []).append(rf)
        ids = tuple(sorted(reached))
        return EntitySetValue(ids=ids, bindings={eid: tuple(reached[eid]) for eid in ids})

    # -- filter ----------------------------------------------------------

    def _concept_member_ids(self, origin: int, concept_name: str) -> set[str]:
        cids = self.idx.concept_name_index.get(concept_name)
        if not cids:
            raise ExecutionError(origin, "unknown_concept", f"unknown concept name '{concept_name}'")
        members: set[str] = set()
        for cid in cids:
            members.update(self.idx.concept_extension[cid])
        return members

    def _eval_filterconcept(self, node, origin, deps) -> EntitySetValue:
        members = self._concept_member_ids(origin, node.inputs[0])
        src = deps[0]
        ids = tuple(eid for eid in src.ids if eid in members)
        if src.bindings is None:
            return EntitySetValue(ids=ids)
        return EntitySetValue(ids=ids, bindings={eid: src.bindings[eid] for eid in ids})

    def _filter_target(self, node, origin) -> tuple[ValueLiteral, str]:
        kind = _FILTER_ARG_KINDS[node.function]
        if kind is ValueKind.STRING:
            return string_value(node.inputs[1]), "="
        op = node.inputs[2]
        if op not in ("=", "!=", "<", ">"):
            raise ExecutionError(origin, "bad_literal", f"unknown comparator '{op}'")
        if kind is ValueKind.QUANTITY:
            return parse_quantity(node.inputs[1]), op
        if kind is ValueKind.YEAR:
            return parse_year(node.inputs[1]), op
        return parse_date(node.inputs[1]), op

    def _eval_filter_attr(self, node, origin, deps) -> EntitySetValue:
        target, op = self._filter_target(node, origin)
        key = node.inputs[0]
        bindings: dict[str, tuple[Fact, ...]] = {}
        for eid in deps[0].ids:
            matching = tuple(
                fact
                for fact in self.kb.entities[eid].facts_by_key.get(key, ())
                if compare_values(fact.value, op, target)
            )
            if matching:
                bindings[eid] = matching
        return EntitySetValue(ids=tuple(sorted(bindings)), bindings=bindings)

    _eval_filterstr = _eval_filter_attr
    _eval_filternum = _eval_filter_attr
    _eval_filteryear = _eval_filter_attr
    _eval_filterdate = _eval_filter_attr

    def _qfilter_target(self, node, origin) -> tuple[ValueLiteral, str]:
        kind = _QFILTER_ARG_KINDS[node.function]
        if kind is ValueKind.STRING:
            return string_value(node.inputs[1]), "="
        op = node.inputs[2]
        if op not in ("=", "!=", "<", ">"):
            raise ExecutionError(origin, "bad_literal", f"unknown comparator '{op}'")
        if kind is ValueKind.QUANTITY:
            return parse_quantity(node.inputs[1]), op
        if kind is ValueKind.YEAR:
            return parse_year(node.inputs[1]), op
        return parse_date(node.inputs[1]), op

    def _eval_qfilter(self, node, origin, deps) -> EntitySetValue:
        target, op = self._qfilter_target(node, origin)
        qkey = node.inputs[0]
        src = deps[0]
        if src.bindings is None:
            raise ExecutionError(origin, "invalid_program", f"{node.function} requires fact bindings")
        bindings: dict[str, tuple[Fact, ...]] = {}
        for eid in src.ids:
            kept = tuple(
                fact
                for fact in src.bindings[eid]
                if any(compare_values(qv, op, target) for qv in fact.qualifiers.get(qkey, ()))
            )
            if kept:
                bindings[eid] = kept
        return EntitySetValue(ids=tuple(sorted(bindings)), bindings=bindings)

    _eval_qfilterstr = _eval_qfilter
    _eval_qfilternum = _eval_qfilter
    _eval_qfilteryear = _eval_qfilter
    _eval_qfilterdate = _eval_qfilter

    # -- set -------------------------------------------------------------

    def _eval_and(self, node, origin, deps) -> EntitySetValue:
        return EntitySetValue(ids=tuple(sorted(set(deps[0].ids) & set(deps[1].ids))))

    def _eval_or(self, node, origin, deps) -> EntitySetValue:
        return EntitySetValue(ids=tuple(sorted(set(deps[0].ids) | set(deps[1].ids))))

    # -- selection -------------------------------------------------------

    def _comparable_values(self, entity_ids, key) -> list[tuple[str, ValueLiteral]]:
        """First comparable fact value per entity under `key`.

        Quantities are restricted to the unit of the first comparable fact
        encountered; years and dates are mutually comparable.  Incompatible
        facts are skipped with a warning.
        """
        context: tuple[ValueKind, str | None] | None = None
        out: list[tuple[str, ValueLiteral]] = []
        for eid in entity_ids:
            for fact in self.kb.entities[eid].facts_by_key.get(key, ()):
                v = fact.value
                if v.kind is ValueKind.STRING:
                    continue
                if context is None:
                    if v.kind is ValueKind.QUANTITY:
                        context = (ValueKind.QUANTITY, v.unit)
                    else:
                        context = (ValueKind.YEAR, None)  # year/date family
                if v.kind is ValueKind.QUANTITY:
                    if context[0] is not ValueKind.QUANTITY or v.unit != context[1]:
                        self._warnings.append(
                            f"skipped incomparable '{key}' value {render_value(v)} on {eid}"
                        )
                        continue
                elif context[0] is ValueKind.QUANTITY:
                    self._warnings.append(
                        f"skipped incomparable '{key}' value {render_value(v)} on {eid}"
                    )
                    continue
                out.append((eid, v))
                break
        return out

    def _eval_selectbetween(self, node, origin, deps) -> StringListValue:
        key, op = node.inputs
        if op not in ("greater", "less"):
            raise ExecutionError(origin, "bad_literal", f"op must be greater or less, got '{op}'")
        a = self._first_of_side(deps[0], origin, "SelectBetween", "left")
        b = self._first_of_side(deps[1], origin, "SelectBetween", "right")
        candidates = self._comparable_values((a, b), key)
        if len(candidates) < 2:
            raise ExecutionError(origin, "no_candidate", f"both sides need a comparable '{key}' value")
        (ea, va), (eb, vb) = candidates
        cmp = ">" if op == "greater" else "<"
        winner = eb if compare_values(vb, cmp, va) else ea  # ties go to the left side
        return StringListValue(strings=(self.kb.entities[winner].name,))

    def _eval_selectamong(self, node, origin, deps) -> StringListValue:
        key, op = node.inputs
        if op not in ("largest", "smallest"):
            raise ExecutionError(origin, "bad_literal", f"op must be largest or smallest, got '{op}'")
        ids = self._require_entities(deps[0], origin, "SelectAmong")
        candidates = self._comparable_values(ids, key)
        if not candidates:
            raise ExecutionError(origin, "no_candidate", f"no entity in the set has a comparable '{key}' value")
        cmp = ">" if op == "largest" else "<"
        best = [candidates[0]]
        for cand in candidates[1:]:
            if compare_values(cand[1], cmp, best[0][1]):
                best = [cand]
            elif compare_values(cand[1], "=", best[0][1]):
                best.append(cand)
        names = sorted(self.kb.entities[eid].name for eid, _ in best)
        return StringListValue(strings=tuple(names))

    # -- verification ----------------------------------------------------

    def _eval_verify(self, node, origin, deps) -> BoolValue:
        kind = _VERIFY_ARG_KINDS[node.function]
        if kind is ValueKind.STRING:
            target, op = string_value(node.inputs[0]), "="
        else:
            op = node.inputs[1]
            if op not in ("=", "!=", "<", ">"):
                raise ExecutionError(origin, "bad_literal", f"unknown comparator '{op}'")
            if kind is ValueKind.QUANTITY:
                target = parse_quantity(node.inputs[0])
            elif kind is ValueKind.YEAR:
                target = parse_year(node.inputs[0])
            else:
                target = parse_date(node.inputs[0])
        values = deps[0].values
        ok = bool(values) and all(compare_values(v, op, target) for v in values)
        return BoolValue(flag=ok)

    _eval_verifystr = _eval_verify
    _eval_verifynum = _eval_verify
    _eval_verifyyear = _eval_verify
    _eval_verifydate = _eval_verify

    # -- fused index scans -------------------------------------------------

    def _eval_fused(self, node: OperatorNode) -> EntitySetValue:
        candidates: set[str] | None = None  # None: all entities, not materialized
        bindings: dict[str, tuple[Fact, ...]] | None = None
        value = EntitySetValue(ids=())
        for logical in node.fused:
            origin = logical.origin if logical.origin is not None else -1
            self._warnings = []
            started = time.perf_counter_ns()
            if logical.function == "FindAll":
                elapsed = (time.perf_counter_ns() - started) // 1000
                if self.want_trace:
                    # Synthesized without materializing the full set.
                    self.entries.append(
                        TraceEntry(
                            index=origin,
                            function="FindAll",
                            inputs=(),
                            kind=OutputKind.ENTITY_SET.value,
                            count=len(self.kb.sorted_entity_ids),
                            preview=[
                                self.kb.entities[eid].name
                                for eid in self.kb.sorted_entity_ids[: self.preview_k]
                            ],
                            elapsed_us=elapsed,
                        )
                    )
                continue
            if logical.function == "FilterConcept":
                members = self._concept_member_ids(origin, logical.inputs[0])
                candidates = members if candidates is None else candidates & members
                if bindings is not None:
                    bindings = {eid: bindings[eid] for eid in candidates if eid in bindings}
                value = EntitySetValue(ids=tuple(sorted(candidates)), bindings=bindings)
            else:
                try:
                    target, op = self._filter_target(logical, origin)
                except LiteralParseError as exc:
                    raise ExecutionError(origin, "bad_literal", str(exc)) from None
                pairs = lookup_attribute(self.idx, logical.inputs[0], op, target)
                new_bindings: dict[str, list[Fact]] = {}
                for eid, fact in pairs:
                    if candidates is None or eid in candidates:
                        new_bindings.setdefault(eid, []).append(fact)
                candidates = set(new_bindings)
                bindings = {eid: tuple(facts) for eid, facts in new_bindings.items()}
                value = EntitySetValue(ids=tuple(sorted(candidates)), bindings=bindings)
            elapsed = (time.perf_counter_ns() - started) // 1000
            if self.want_trace:
                self._record(origin, logical.function, logical.inputs, value, elapsed, tuple(self._warnings))
        return value
