"""Seeded random program generation over a KB's actual schema.

Used by the benchmark CLI for workload synthesis and by the test suite as a
source of valid programs.  Arguments are drawn from the KB (real names, keys,
relations and fact values) so most generated programs execute successfully;
a small error rate can be injected to exercise runtime failure paths.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .kb import KnowledgeBase
from .values import ValueKind, render_value

_COMPARATORS = ("=", "!=", "<", ">")


@dataclass(slots=True)
class SchemaSample:
    """Deterministic snapshot of a KB's vocabulary plus sampled fact values."""

    entity_names: list[str]
    concept_names: list[str]
    relations: list[str]
    attribute_keys: list[str]
    facts_by_kind: dict[ValueKind, list]  # (key, ValueLiteral)
    qualifier_samples: dict[ValueKind, list]  # (qualifier key, ValueLiteral)

    @property
    def empty(self) -> bool:
        return not self.entity_names


def sample_schema(kb: KnowledgeBase, fact_cap: int = 20_000) -> SchemaSample:
    entity_names = sorted({rec.name for rec in kb.entities.values()})
    facts_by_kind: dict[ValueKind, list] = {k: [] for k in ValueKind}
    qualifier_samples: dict[ValueKind, list] = {k: [] for k in ValueKind}
    scanned = 0
    for eid in kb.sorted_entity_ids:
        if scanned >= fact_cap:
            break
        record = kb.entities[eid]
        for fact in record.literal_facts:
            facts_by_kind[fact.value.kind].append((fact.key, fact.value))
            for qkey, qvals in fact.qualifiers.items():
                for qv in qvals:
                    qualifier_samples[qv.kind].append((qkey, qv))
            scanned += 1
        for rfact in record.relational_facts:
            for qkey, qvals in rfact.qualifiers.items():
                for qv in qvals:
                    qualifier_samples[qv.kind].append((qkey, qv))
    return SchemaSample(
        entity_names=entity_names,
        concept_names=sorted({rec.name for rec in kb.concepts.values()}),
        relations=sorted(kb.relation_names),
        attribute_keys=sorted(kb.attribute_keys),
        facts_by_kind=facts_by_kind,
        qualifier_samples=qualifier_samples,
    )


_FILTERS = {
    ValueKind.STRING: "FilterStr",
    ValueKind.QUANTITY: "FilterNum",
    ValueKind.YEAR: "FilterYear",
    ValueKind.DATE: "FilterDate",
}
_QFILTERS = {
    ValueKind.STRING: "QFilterStr",
    ValueKind.QUANTITY: "QFilterNum",
    ValueKind.YEAR: "QFilterYear",
    ValueKind.DATE: "QFilterDate",
}
_VERIFIERS = {
    ValueKind.STRING: "VerifyStr",
    ValueKind.QUANTITY: "VerifyNum",
    ValueKind.YEAR: "VerifyYear",
    ValueKind.DATE: "VerifyDate",
}


class ProgramGenerator:
    def __init__(self, schema: SchemaSample, rng: random.Random, error_rate: float = 0.0) -> None:
        if schema.empty:
            raise ValueError("cannot generate programs over an empty KB")
        self.schema = schema
        self.rng = rng
        self.error_rate = error_rate
        self.nodes: list[dict] = []

    # -- argument sampling -------------------------------------------------

    def _maybe_bogus(self, real: str, pool: str) -> str:
        if self.error_rate and self.rng.random() < self.error_rate:
            return f"no such {pool} {self.rng.randrange(10_000)}"
        return real

    def _entity_name(self) -> str:
        return self._maybe_bogus(self.rng.choice(self.schema.entity_names), "entity")

    def _concept_name(self) -> str:
        if not self.schema.concept_names:
            return "no such concept"
        return self._maybe_bogus(self.rng.choice(self.schema.concept_names), "concept")

    def _relation(self) -> str:
        if not self.schema.relations:
            return "no such relation"
        return self._maybe_bogus(self.rng.choice(self.schema.relations), "relation")

    def _attribute_key(self) -> str:
        if not self.schema.attribute_keys:
            return "no such key"
        return self.rng.choice(self.schema.attribute_keys)

    def _fact_of_kind(self, kinds: list[ValueKind]) -> tuple[str, object] | None:
        kinds = [k for k in kinds if self.schema.facts_by_kind[k]]
        if not kinds:
            return None
        return self.rng.choice(self.schema.facts_by_kind[self.rng.choice(kinds)])

    # -- node emission -------------------------------------------------------

    def _emit(self, function: str, inputs: list[str], dependencies: list[int]) -> int:
        self.nodes.append({"function": function, "inputs": inputs, "dependencies": dependencies})
        return len(self.nodes) - 1

    def entity_set(self, budget: int, need_facts: bool = False) -> int:
        """Emit a subtree producing an entity set; returns its node index."""
        rng = self.rng
        if need_facts:
            options = ["relate", "filter"]
            if budget >= 3:
                options += ["qfilter", "filter_concept_facts"]
        else:
            options = ["find", "findall"]
            if budget >= 2:
                options += ["relate", "filter", "filter_concept", "filter"]
            if budget >= 3:
                options += ["and_or", "qfilter"]
        choice = rng.choice(options)
        if choice == "find":
            return self._emit("Find", [self._entity_name()], [])
        if choice == "findall":
            return self._emit("FindAll", [], [])
        if choice == "relate":
            src = self.entity_set(budget - 1)
            return self._emit("Relate", [self._relation(), rng.choice(("forward", "backward"))], [src])
        if choice == "filter":
            src = self.entity_set(budget - 1)
            fact = self._fact_of_kind(list(_FILTERS))
            if fact is None:
                return self._emit("FilterStr", [self._attribute_key(), "none"], [src])
            key, value = fact
            function = _FILTERS[value.kind]
            if value.kind is ValueKind.STRING:
                return self._emit(function, [key, value.text], [src])
            return self._emit(function, [key, render_value(value), rng.choice(_COMPARATORS)], [src])
        if choice == "filter_concept":
            src = self.entity_set(budget - 1)
            return self._emit("FilterConcept", [self._concept_name()], [src])
        if choice == "filter_concept_facts":
            src = self.entity_set(budget - 1, need_facts=True)
            return self._emit("FilterConcept", [self._concept_name()], [src])
        if choice == "qfilter":
            src = self.entity_set(budget - 1, need_facts=True)
            sample_kinds = [k for k in _QFILTERS if self.schema.qualifier_samples[k]]
            if not sample_kinds:
                return self._emit("QFilterStr", ["no qualifier", "none"], [src])
            qkey, qv = rng.choice(self.schema.qualifier_samples[rng.choice(sample_kinds)])
            function = _QFILTERS[qv.kind]
            if qv.kind is ValueKind.STRING:
                return self._emit(function, [qkey, qv.text], [src])
            return self._emit(function, [qkey, render_value(qv), rng.choice(_COMPARATORS)], [src])
        # and_or
        half = (budget - 1) // 2
        left = self.entity_set(max(1, half))
        right = self.entity_set(max(1, budget - 1 - half))
        return self._emit(rng.choice(("And", "Or")), [], [left, right])

    def value_node(self, budget: int) -> int:
        rng = self.rng
        options = ["query_attr"]
        if budget >= 3:
            options += ["under_condition", "attr_qualifier", "relation_qualifier"]
        choice = rng.choice(options)
        if choice == "relation_qualifier":
            half = (budget - 1) // 2
            a = self.entity_set(max(1, half))
            b = self.entity_set(max(1, budget - 1 - half))
            qkey = self._qualifier_key()
            return self._emit("QueryRelationQualifier", [self._relation(), qkey], [a, b])
        src = self.entity_set(budget - 1)
        key = self._attribute_key()
        if choice == "query_attr":
            return self._emit("QueryAttr", [key], [src])
        if choice == "under_condition":
            qkey, qvalue = self._qualifier_pair()
            return self._emit("QueryAttrUnderCondition", [key, qkey, qvalue], [src])
        fact = self._fact_of_kind(list(ValueKind))
        value_text = render_value(fact[1]) if fact else "none"
        if fact:
            key = fact[0]
        return self._emit("QueryAttrQualifier", [key, value_text, self._qualifier_key()], [src])

    def _qualifier_key(self) -> str:
        pools = [p for p in self.schema.qualifier_samples.values() if p]
        if not pools:
            return "no qualifier"
        return self.rng.choice(self.rng.choice(pools))[0]

    def _qualifier_pair(self) -> tuple[str, str]:
        pools = [p for p in self.schema.qualifier_samples.values() if p]
        if not pools:
            return "no qualifier", "none"
        qkey, qv = self.rng.choice(self.rng.choice(pools))
        return qkey, render_value(qv)

    def string_node(self, budget: int) -> int:
        rng = self.rng
        options = ["query_name", "select_among"]
        if budget >= 3:
            options += ["query_relation", "select_between"]
        choice = rng.choice(options)
        if choice == "query_name":
            return self._emit("QueryName", [], [self.entity_set(budget - 1)])
        if choice == "select_among":
            src = self.entity_set(budget - 1)
            key = self._comparable_key()
            return self._emit("SelectAmong", [key, rng.choice(("largest", "smallest"))], [src])
        half = (budget - 1) // 2
        a = self.entity_set(max(1, half))
        b = self.entity_set(max(1, budget - 1 - half))
        if choice == "query_relation":
            return self._emit("QueryRelation", [], [a, b])
        key = self._comparable_key()
        return self._emit("SelectBetween", [key, rng.choice(("greater", "less"))], [a, b])

    def _comparable_key(self) -> str:
        fact = self._fact_of_kind([ValueKind.QUANTITY, ValueKind.YEAR, ValueKind.DATE])
        return fact[0] if fact else self._attribute_key()

    def bool_node(self, budget: int) -> int:
        src = self.value_node(budget - 1)
        fact = self._fact_of_kind(list(ValueKind))
        if fact is None:
            return self._emit("VerifyStr", ["none"], [src])
        _, value = fact
        function = _VERIFIERS[value.kind]
        if value.kind is ValueKind.STRING:
            return self._emit(function, [value.text], [src])
        return self._emit(function, [render_value(value), self.rng.choice(_COMPARATORS)], [src])


def generate_program(
    schema: SchemaSample,
    rng: random.Random,
    max_nodes: int = 10,
    error_rate: float = 0.0,
) -> list[dict]:
    """One random valid program document with at most `max_nodes` nodes."""
    gen = ProgramGenerator(schema, rng, error_rate)
    # The facts-demanding paths may add a node or two beyond the budget; leave margin.
    budget = rng.randint(2, max(2, max_nodes - 2))
    kind = rng.choices(("int", "string", "value", "bool", "entities"), weights=(25, 25, 20, 15, 15))[0]
    if kind == "int":
        gen._emit("Count", [], [gen.entity_set(budget - 1)])
    elif kind == "string":
        gen.string_node(budget)
    elif kind == "value":
        gen.value_node(budget)
    elif kind == "bool":
        gen.bool_node(max(3, budget))
    else:
        gen.entity_set(budget)
    return gen.nodes


def generate_filter_chain(schema: SchemaSample, rng: random.Random) -> list[dict]:
    """A FindAll -> Filter* (-> FilterConcept) -> Count program, fusion-eligible."""
    gen = ProgramGenerator(schema, rng)
    gen._emit("FindAll", [], [])
    fact = gen._fact_of_kind([ValueKind.QUANTITY, ValueKind.YEAR, ValueKind.DATE, ValueKind.STRING])
    if fact is None:
        gen._emit("FilterStr", [gen._attribute_key(), "none"], [0])
    else:
        key, value = fact
        if value.kind is ValueKind.STRING:
            gen._emit("FilterStr", [key, value.text], [0])
        else:
            op = rng.choices(("=", "<", ">"), weights=(60, 20, 20))[0]
            gen._emit(_FILTERS[value.kind], [key, render_value(value), op], [0])
    last = 1
    if schema.concept_names and rng.random() < 0.3:
        last = gen._emit("FilterConcept", [rng.choice(schema.concept_names)], [last])
    gen._emit("Count", [], [last])
    return gen.nodes


def generate_mixed_workload(schema: SchemaSample, rng: random.Random, count: int) -> list[list[dict]]:
    """Bounded-shape workload mixing the operator families; selective by design."""
    out = []
    for _ in range(count):
        shape = rng.randrange(8)
        gen = ProgramGenerator(schema, rng)
        if shape == 0:
            out.append(generate_filter_chain(schema, rng))
            continue
        if shape == 1:  # Find -> QueryAttr
            gen.value_node(2)
        elif shape == 2:  # Find -> QueryAttr -> Verify
            gen.bool_node(3)
        elif shape == 3:  # Find -> Relate -> FilterConcept -> Count
            src = gen._emit("Find", [gen._entity_name()], [])
            rel = gen._emit("Relate", [gen._relation(), rng.choice(("forward", "backward"))], [src])
            fc = gen._emit("FilterConcept", [gen._concept_name()], [rel])
            gen._emit("Count", [], [fc])
        elif shape == 4:  # two Relate branches joined
            a0 = gen._emit("Find", [gen._entity_name()], [])
            a1 = gen._emit("Relate", [gen._relation(), "forward"], [a0])
            b0 = gen._emit("Find", [gen._entity_name()], [])
            b1 = gen._emit("Relate", [gen._relation(), "forward"], [b0])
            j = gen._emit(rng.choice(("And", "Or")), [], [a1, b1])
            gen._emit("Count", [], [j])
        elif shape == 5:  # SelectAmong over a relate neighborhood
            src = gen._emit("Find", [gen._entity_name()], [])
            rel = gen._emit("Relate", [gen._relation(), rng.choice(("forward", "backward"))], [src])
            gen._emit("SelectAmong", [gen._comparable_key(), rng.choice(("largest", "smallest"))], [rel])
        elif shape == 6:  # QFilter over a relate neighborhood
            src = gen._emit("Find", [gen._entity_name()], [])
            rel = gen._emit("Relate", [gen._relation(), rng.choice(("forward", "backward"))], [src])
            sample_kinds = [k for k in _QFILTERS if schema.qualifier_samples[k]]
            if sample_kinds:
                qkey, qv = rng.choice(schema.qualifier_samples[rng.choice(sample_kinds)])
                if qv.kind is ValueKind.STRING:
                    q = gen._emit(_QFILTERS[qv.kind], [qkey, qv.text], [rel])
                else:
                    q = gen._emit(_QFILTERS[qv.kind], [qkey, render_value(qv), rng.choice(_COMPARATORS)], [rel])
            else:
                q = rel
            gen._emit("Count", [], [q])
        else:  # SelectBetween two entities
            a = gen._emit("Find", [gen._entity_name()], [])
            b = gen._emit("Find", [gen._entity_name()], [])
            gen._emit("SelectBetween", [gen._comparable_key(), rng.choice(("greater", "less"))], [a, b])
        out.append(gen.nodes)
    return out
