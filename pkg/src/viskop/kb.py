"""Knowledge-base data model and JSON dump loader.

The store holds entities, concepts, literal facts (entity/attribute/value) and
relational facts (head/relation/tail), each optionally annotated with
qualifiers.  Relational storage is normalized to mirrored form: every fact
``(s, r, forward, o)`` has a counterpart ``(o, r, backward, s)`` on the object
entity, so relation traversal in either direction is a local scan.

The loaded KnowledgeBase is immutable by convention and safe to share across
concurrent readers.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .values import ValueLiteral, value_from_dump, value_to_dump

FORWARD = "forward"
BACKWARD = "backward"

# Shared empty qualifier map; most facts carry no qualifiers.
NO_QUALIFIERS: Mapping[str, tuple[ValueLiteral, ...]] = MappingProxyType({})


class KBLoadError(Exception):
    """Raised when a dump cannot be loaded; the message names the offender."""


@dataclass(frozen=True, slots=True)
class LiteralFact:
    owner: str
    key: str
    value: ValueLiteral
    qualifiers: Mapping[str, tuple[ValueLiteral, ...]]
    ordinal: int  # position within the owner's literal fact list


@dataclass(frozen=True, slots=True)
class RelationalFact:
    subject: str
    relation: str
    direction: str  # FORWARD: subject is head; BACKWARD: subject is tail
    object: str
    qualifiers: Mapping[str, tuple[ValueLiteral, ...]]
    ordinal: int  # position within the subject's relational fact list


Fact = LiteralFact | RelationalFact


@dataclass(slots=True)
class EntityRecord:
    id: str
    name: str
    instance_of: tuple[str, ...]
    literal_facts: tuple[LiteralFact, ...]
    relational_facts: tuple[RelationalFact, ...]
    facts_by_key: dict[str, tuple[LiteralFact, ...]]


@dataclass(slots=True)
class ConceptRecord:
    id: str
    name: str
    subclass_of: tuple[str, ...]


@dataclass(slots=True)
class Stats:
    entity_count: int
    concept_count: int
    relation_name_count: int
    attribute_key_count: int

    def to_dict(self) -> dict:
        return {
            "entity_count": self.entity_count,
            "concept_count": self.concept_count,
            "relation_name_count": self.relation_name_count,
            "attribute_key_count": self.attribute_key_count,
        }


@dataclass(slots=True)
class KnowledgeBase:
    entities: dict[str, EntityRecord]
    concepts: dict[str, ConceptRecord]
    source: str
    loaded_at: dt.datetime
    sorted_entity_ids: tuple[str, ...]
    relation_names: frozenset[str]
    attribute_keys: frozenset[str]
    qualifier_keys: frozenset[str]
    concept_children: dict[str, tuple[str, ...]]  # concept id -> direct subclasses


def _parse_qualifiers(raw, where: str) -> Mapping[str, tuple[ValueLiteral, ...]]:
    if raw is None:
        return NO_QUALIFIERS
    if not isinstance(raw, dict):
        raise KBLoadError(f"qualifiers must be an object in {where}")
    if not raw:
        return NO_QUALIFIERS
    out: dict[str, tuple[ValueLiteral, ...]] = {}
    for qkey, qvals in raw.items():
        if not qkey:
            raise KBLoadError(f"empty qualifier key in {where}")
        if isinstance(qvals, dict):  # single value object accepted, normalized to a list
            qvals = [qvals]
        if not isinstance(qvals, list) or not qvals:
            raise KBLoadError(f"qualifier '{qkey}' in {where} must map to a non-empty list")
        try:
            out[qkey] = tuple(value_from_dump(v) for v in qvals)
        except ValueError as exc:
            raise KBLoadError(f"bad qualifier value under '{qkey}' in {where}: {exc}") from None
    return out


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise KBLoadError(f"duplicate key '{key}' in dump")
        seen[key] = value
    return seen


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load a KB dump file; see `load_kb_data` for the accepted layout."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise KBLoadError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise KBLoadError(f"malformed JSON in {path}: {exc}") from None
    return load_kb_data(data, source=str(path))


def load_kb_data(data: dict, source: str = "<memory>") -> KnowledgeBase:
    """Build a KnowledgeBase from an already-decoded dump dictionary.

    Layout: ``{"concepts": {id: {"name", "subclassOf"}}, "entities": {id:
    {"name", "instanceOf", "attributes", "relations"}}}``.  ``predicate`` is
    accepted as an alias for ``relation``; a missing quantity ``unit`` means
    unitless; relations stored once per pair are mirrored on load.
    """
    if not isinstance(data, dict):
        raise KBLoadError("dump root must be an object")
    for section in ("concepts", "entities"):
        if section not in data or not isinstance(data[section], dict):
            raise KBLoadError(f"dump is missing the '{section}' object")

    concepts: dict[str, ConceptRecord] = {}
    for cid, raw in data["concepts"].items():
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
            raise KBLoadError(f"malformed concept record '{cid}'")
        parents = raw.get("subclassOf", [])
        if not isinstance(parents, list):
            raise KBLoadError(f"subclassOf of concept '{cid}' must be a list")
        concepts[cid] = ConceptRecord(id=cid, name=raw["name"], subclass_of=tuple(parents))

    for cid, rec in concepts.items():
        for parent in rec.subclass_of:
            if parent not in concepts:
                raise KBLoadError(f"concept '{cid}' subclassOf dangling concept '{parent}'")
    _check_acyclic(concepts)

    raw_entities = data["entities"]
    names: dict[str, str] = {}
    for eid, raw in raw_entities.items():
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
            raise KBLoadError(f"malformed entity record '{eid}'")
        names[eid] = raw["name"]

    entities: dict[str, EntityRecord] = {}
    stored_relational: dict[str, list[RelationalFact]] = {eid: [] for eid in raw_entities}
    signatures: set[tuple[str, str, str, str]] = set()

    for eid, raw in raw_entities.items():
        tags = raw.get("instanceOf", [])
        if not isinstance(tags, list):
            raise KBLoadError(f"instanceOf of entity '{eid}' must be a list")
        for cid in tags:
            if cid not in concepts:
                raise KBLoadError(f"entity '{eid}' instanceOf dangling concept '{cid}'")

        literal_facts: list[LiteralFact] = []
        for raw_attr in raw.get("attributes", []):
            if not isinstance(raw_attr, dict) or not raw_attr.get("key"):
                raise KBLoadError(f"attribute of entity '{eid}' is missing its key")
            where = f"attribute '{raw_attr['key']}' of entity '{eid}'"
            try:
                value = value_from_dump(raw_attr.get("value"))
            except ValueError as exc:
                raise KBLoadError(f"bad value in {where}: {exc}") from None
            literal_facts.append(
                LiteralFact(
                    owner=eid,
                    key=raw_attr["key"],
                    value=value,
                    qualifiers=_parse_qualifiers(raw_attr.get("qualifiers"), where),
                    ordinal=len(literal_facts),
                )
            )

        for raw_rel in raw.get("relations", []):
            if not isinstance(raw_rel, dict):
                raise KBLoadError(f"malformed relation entry on entity '{eid}'")
            relation = raw_rel.get("relation", raw_rel.get("predicate"))
            if not relation:
                raise KBLoadError(f"relation entry on entity '{eid}' has no relation name")
            direction = raw_rel.get("direction")
            if direction not in (FORWARD, BACKWARD):
                raise KBLoadError(f"relation '{relation}' on entity '{eid}' has bad direction {direction!r}")
            obj = raw_rel.get("object")
            if obj not in names:
                raise KBLoadError(f"relation '{relation}' on entity '{eid}' points to dangling entity '{obj}'")
            where = f"relation '{relation}' on entity '{eid}'"
            fact = RelationalFact(
                subject=eid,
                relation=relation,
                direction=direction,
                object=obj,
                qualifiers=_parse_qualifiers(raw_rel.get("qualifiers"), where),
                ordinal=len(stored_relational[eid]),
            )
            stored_relational[eid].append(fact)
            signatures.add((eid, relation, direction, obj))

        facts_by_key: dict[str, list[LiteralFact]] = {}
        for fact in literal_facts:
            facts_by_key.setdefault(fact.key, []).append(fact)
        entities[eid] = EntityRecord(
            id=eid,
            name=raw["name"],
            instance_of=tuple(tags),
            literal_facts=tuple(literal_facts),
            relational_facts=(),  # filled after mirroring
            facts_by_key={k: tuple(v) for k, v in facts_by_key.items()},
        )

    # Synthesize missing mirrors so both directions are locally visible.
    for eid in raw_entities:
        for fact in stored_relational[eid]:
            flipped_dir = BACKWARD if fact.direction == FORWARD else FORWARD
            if (fact.object, fact.relation, flipped_dir, fact.subject) in signatures:
                continue
            target = stored_relational[fact.object]
            target.append(
                RelationalFact(
                    subject=fact.object,
                    relation=fact.relation,
                    direction=flipped_dir,
                    object=fact.subject,
                    qualifiers=fact.qualifiers,
                    ordinal=len(target),
                )
            )
    for eid, record in entities.items():
        record.relational_facts = tuple(stored_relational[eid])

    relation_names = set()
    attribute_keys = set()
    qualifier_keys = set()
    for record in entities.values():
        for lf in record.literal_facts:
            attribute_keys.add(lf.key)
            qualifier_keys.update(lf.qualifiers)
        for rf in record.relational_facts:
            relation_names.add(rf.relation)
            qualifier_keys.update(rf.qualifiers)

    children: dict[str, list[str]] = {cid: [] for cid in concepts}
    for cid in concepts:  # deterministic: dump order
        for parent in concepts[cid].subclass_of:
            children[parent].append(cid)

    return KnowledgeBase(
        entities=entities,
        concepts=concepts,
        source=source,
        loaded_at=dt.datetime.now(dt.timezone.utc),
        sorted_entity_ids=tuple(sorted(entities)),
        relation_names=frozenset(relation_names),
        attribute_keys=frozenset(attribute_keys),
        qualifier_keys=frozenset(qualifier_keys),
        concept_children={cid: tuple(subs) for cid, subs in children.items()},
    )


def _check_acyclic(concepts: dict[str, ConceptRecord]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {cid: WHITE for cid in concepts}
    for start in concepts:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            cid, i = stack[-1]
            parents = concepts[cid].subclass_of
            if i == len(parents):
                color[cid] = BLACK
                stack.pop()
                continue
            stack[-1] = (cid, i + 1)
            parent = parents[i]
            if color[parent] == GRAY:
                raise KBLoadError(f"cyclic subclassOf involving concept '{parent}'")
            if color[parent] == WHITE:
                color[parent] = GRAY
                stack.append((parent, 0))


def kb_stats(kb: KnowledgeBase) -> Stats:
    return Stats(
        entity_count=len(kb.entities),
        concept_count=len(kb.concepts),
        relation_name_count=len(kb.relation_names),
        attribute_key_count=len(kb.attribute_keys),
    )


def resolve_entity_name(kb: KnowledgeBase, name: str) -> list[str]:
    """All entity ids whose name equals `name` exactly, in ascending id order."""
    return sorted(eid for eid, rec in kb.entities.items() if rec.name == name)


def concept_descendants(kb: KnowledgeBase, concept_id: str) -> set[str]:
    """Reflexive-transitive closure of `concept_id` under subclassOf."""
    if concept_id not in kb.concepts:
        raise KeyError(f"unknown concept id: {concept_id}")
    seen = {concept_id}
    frontier = [concept_id]
    while frontier:
        cid = frontier.pop()
        for child in kb.concept_children.get(cid, ()):
            if child not in seen:
                seen.add(child)
                frontier.append(child)
    return seen


def concept_ancestors(kb: KnowledgeBase, concept_id: str) -> set[str]:
    """Reflexive-transitive closure of `concept_id` upward along subclassOf."""
    seen = {concept_id}
    frontier = [concept_id]
    while frontier:
        cid = frontier.pop()
        for parent in kb.concepts[cid].subclass_of:
            if parent not in seen:
                seen.add(parent)
                frontier.append(parent)
    return seen


def _qualifiers_to_dump(qualifiers: Mapping[str, tuple[ValueLiteral, ...]]) -> dict:
    return {qkey: [value_to_dump(v) for v in vals] for qkey, vals in qualifiers.items()}


def dump_kb(kb: KnowledgeBase) -> dict:
    """Serialize back to the dump layout, in normalized (mirrored) form."""
    concepts = {
        cid: {"name": rec.name, "subclassOf": list(rec.subclass_of)}
        for cid, rec in kb.concepts.items()
    }
    entities = {}
    for eid, rec in kb.entities.items():
        entities[eid] = {
            "name": rec.name,
            "instanceOf": list(rec.instance_of),
            "attributes": [
                {
                    "key": lf.key,
                    "value": value_to_dump(lf.value),
                    "qualifiers": _qualifiers_to_dump(lf.qualifiers),
                }
                for lf in rec.literal_facts
            ],
            "relations": [
                {
                    "relation": rf.relation,
                    "direction": rf.direction,
                    "object": rf.object,
                    "qualifiers": _qualifiers_to_dump(rf.qualifiers),
                }
                for rf in rec.relational_facts
            ],
        }
    return {"concepts": concepts, "entities": entities}
