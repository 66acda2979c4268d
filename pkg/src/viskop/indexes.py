"""Inverted indices over the knowledge base.

Attribute lookups are answered from per-key structures: exact string buckets,
and per-kind ordered sequences (quantities partitioned by unit) binary-searched
for ``=``, ``<``, ``>``.  ``!=`` deliberately scans only the key's fact list;
materializing complements would usually be larger than the scan.  Name and
completion lookups go through the pluggable backend stores.
"""

from __future__ import annotations

import bisect
import datetime as dt
from dataclasses import dataclass
from typing import Iterable

from .backends import BackendKind, StringStore, build_store
from .kb import KnowledgeBase, LiteralFact, concept_ancestors
from .values import ValueKind, ValueLiteral, compare_values

SCHEMA_KINDS = ("entity", "concept", "relation", "attribute", "qualifier")

EntityFact = tuple[str, LiteralFact]


@dataclass(slots=True)
class OrderedSeq:
    """Fact entries sorted ascending by comparable value."""

    values: list
    pairs: list[EntityFact]


@dataclass(slots=True)
class CompletionStore:
    """Case-insensitive name store for one schema kind."""

    store: StringStore  # lowercased name -> tuple of original names (sorted)

    def search(self, prefix: str, limit: int) -> list[str]:
        needle = prefix.lower()
        out: list[str] = []
        seen: set[str] = set()
        matched_keys: set[str] = set()
        for key, originals in self.store.prefix_items(needle):
            matched_keys.add(key)
            for name in originals:
                if name not in seen:
                    seen.add(name)
                    out.append(name)
                    if len(out) == limit:
                        return out
        if needle:  # substring pass, skipped when prefix matches already filled the limit
            for key, originals in self.store.items():
                if key in matched_keys or needle not in key:
                    continue
                for name in originals:
                    if name not in seen:
                        seen.add(name)
                        out.append(name)
                        if len(out) == limit:
                            return out
        return out


@dataclass(slots=True)
class IndexSet:
    backend: BackendKind
    name_index: StringStore  # entity name -> tuple of entity ids
    concept_name_index: StringStore  # concept name -> tuple of concept ids
    attr_string_index: dict[tuple[str, str], list[EntityFact]]
    attr_quantity_index: dict[tuple[str, str], OrderedSeq]  # (key, unit)
    attr_year_index: dict[str, OrderedSeq]
    attr_date_index: dict[str, OrderedSeq]
    attr_by_key: dict[str, list[EntityFact]]
    concept_extension: dict[str, tuple[str, ...]]
    completion: dict[str, CompletionStore]


def build_indices(kb: KnowledgeBase, backend: BackendKind = BackendKind.HASHING) -> IndexSet:
    """Build all index structures; deterministic for a given KB and backend."""
    names: dict[str, list[str]] = {}
    for eid in kb.sorted_entity_ids:
        names.setdefault(kb.entities[eid].name, []).append(eid)
    concept_names: dict[str, list[str]] = {}
    for cid in sorted(kb.concepts):
        concept_names.setdefault(kb.concepts[cid].name, []).append(cid)

    string_index: dict[tuple[str, str], list[EntityFact]] = {}
    quantity_raw: dict[tuple[str, str], list] = {}
    year_raw: dict[str, list] = {}
    date_raw: dict[str, list] = {}
    by_key: dict[str, list[EntityFact]] = {}
    for eid in kb.sorted_entity_ids:
        for fact in kb.entities[eid].literal_facts:
            pair = (eid, fact)
            by_key.setdefault(fact.key, []).append(pair)
            v = fact.value
            if v.kind is ValueKind.STRING:
                string_index.setdefault((fact.key, v.text), []).append(pair)
            elif v.kind is ValueKind.QUANTITY:
                quantity_raw.setdefault((fact.key, v.unit), []).append((v.amount, eid, fact))
            elif v.kind is ValueKind.YEAR:
                year_raw.setdefault(fact.key, []).append((v.year, eid, fact))
            else:
                date_raw.setdefault(fact.key, []).append((v.date, eid, fact))

    def _freeze(raw: dict) -> dict:
        out = {}
        for key, entries in raw.items():
            entries.sort(key=lambda t: (t[0], t[1], t[2].ordinal))
            out[key] = OrderedSeq(
                values=[t[0] for t in entries],
                pairs=[(t[1], t[2]) for t in entries],
            )
        return out

    extension: dict[str, list[str]] = {cid: [] for cid in kb.concepts}
    ancestors_cache: dict[str, frozenset[str]] = {}
    for eid in kb.sorted_entity_ids:
        reached: set[str] = set()
        for tag in kb.entities[eid].instance_of:
            ancestors = ancestors_cache.get(tag)
            if ancestors is None:
                ancestors = frozenset(concept_ancestors(kb, tag))
                ancestors_cache[tag] = ancestors
            reached.update(ancestors)
        for cid in reached:
            extension[cid].append(eid)

    completion_sources: dict[str, Iterable[str]] = {
        "entity": (rec.name for rec in kb.entities.values()),
        "concept": (rec.name for rec in kb.concepts.values()),
        "relation": kb.relation_names,
        "attribute": kb.attribute_keys,
        "qualifier": kb.qualifier_keys,
    }
    completion: dict[str, CompletionStore] = {}
    for schema_kind, source in completion_sources.items():
        lowered: dict[str, list[str]] = {}
        for name in sorted(set(source)):
            lowered.setdefault(name.lower(), []).append(name)
        completion[schema_kind] = CompletionStore(
            store=build_store(backend, {k: tuple(v) for k, v in lowered.items()})
        )

    return IndexSet(
        backend=backend,
        name_index=build_store(backend, {n: tuple(ids) for n, ids in names.items()}),
        concept_name_index=build_store(backend, {n: tuple(ids) for n, ids in concept_names.items()}),
        attr_string_index=string_index,
        attr_quantity_index=_freeze(quantity_raw),
        attr_year_index=_freeze(year_raw),
        attr_date_index=_freeze(date_raw),
        attr_by_key=by_key,
        concept_extension={cid: tuple(ids) for cid, ids in extension.items()},
        completion=completion,
    )


def _date_seq_vs_year(dates: OrderedSeq, op: str, year: int) -> list[EntityFact]:
    """Entries of a date sequence whose calendar year satisfies `op` vs `year`.

    Calendar dates only span years 1..9999, so year targets outside that range
    reduce to empty or whole-sequence slices.
    """
    if year < dt.MINYEAR:
        return list(dates.pairs) if op == ">" else []
    if year > dt.MAXYEAR:
        return list(dates.pairs) if op == "<" else []
    first = dt.date(year, 1, 1)
    last = dt.date(year, 12, 31)
    if op == "=":
        lo = bisect.bisect_left(dates.values, first)
        hi = bisect.bisect_right(dates.values, last)
        return dates.pairs[lo:hi]
    if op == "<":
        return dates.pairs[: bisect.bisect_left(dates.values, first)]
    return dates.pairs[bisect.bisect_right(dates.values, last) :]


def _seq_range(seq: OrderedSeq | None, op: str, value) -> list[EntityFact]:
    if seq is None:
        return []
    if op == "=":
        lo = bisect.bisect_left(seq.values, value)
        hi = bisect.bisect_right(seq.values, value)
        return seq.pairs[lo:hi]
    if op == "<":
        return seq.pairs[: bisect.bisect_left(seq.values, value)]
    return seq.pairs[bisect.bisect_right(seq.values, value) :]


def lookup_attribute(idx: IndexSet, key: str, op: str, value: ValueLiteral) -> list[EntityFact]:
    """All (entity id, fact) pairs under `key` satisfying `op` against `value`.

    ``=``, ``<`` and ``>`` are answered from the per-key index structures;
    ``!=`` scans the key's fact list.  Quantity comparisons never match across
    units, and year/date comparisons project dates to their year.
    """
    if op == "!=":
        return [pair for pair in idx.attr_by_key.get(key, ()) if compare_values(pair[1].value, op, value)]
    if value.kind is ValueKind.STRING:
        if op != "=":
            raise ValueError(f"comparator {op!r} not supported for string values")
        return list(idx.attr_string_index.get((key, value.text), ()))
    if value.kind is ValueKind.QUANTITY:
        return _seq_range(idx.attr_quantity_index.get((key, value.unit)), op, value.amount)
    if value.kind is ValueKind.YEAR:
        y = value.year
        out = _seq_range(idx.attr_year_index.get(key), op, y)
        dates = idx.attr_date_index.get(key)
        if dates is not None:
            out = out + _date_seq_vs_year(dates, op, y)
        return out
    # date target: exact dates from the date index, year facts by projection
    out = _seq_range(idx.attr_date_index.get(key), op, value.date)
    years = idx.attr_year_index.get(key)
    if years is not None:
        out = out + _seq_range(years, op, value.date.year)
    return out


def complete(idx: IndexSet, kind: str, prefix: str, limit: int) -> list[str]:
    """Ranked completion candidates: case-insensitive prefix matches first
    (lexicographic), then substring matches, deduplicated, truncated to `limit`."""
    if kind not in SCHEMA_KINDS:
        raise ValueError(f"unknown schema kind {kind!r}")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return idx.completion[kind].search(prefix, limit)
