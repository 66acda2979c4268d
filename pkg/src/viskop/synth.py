"""Seeded synthetic KB dumps for benchmarks and property tests.

Shapes follow large-KB ratios: concepts ~1% of entities, ~10 literal facts per
entity, enough stored relational facts that mirrored adjacency averages ~8 per
entity, and a 0.2 qualifier probability per fact.  Identical seeds produce
byte-identical dumps.
"""

from __future__ import annotations

import datetime as dt
import json
import random
from pathlib import Path

_SYLLABLES = (
    "ba", "ce", "dor", "fan", "gil", "han", "jor", "kel", "lam", "mir",
    "nor", "pel", "quin", "ros", "sal", "tor", "ul", "ven", "wil", "zan",
)
_UNITS = ("km²", "kg", "m", "point", "1")
_QUALIFIER_KINDS = ("string", "year", "date")


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 3)))


def _date_string(rng: random.Random) -> str:
    start = dt.date(1900, 1, 1).toordinal()
    end = dt.date(2025, 12, 31).toordinal()
    return dt.date.fromordinal(rng.randint(start, end)).isoformat()


def _value_of_kind(rng: random.Random, kind: str, unit: str | None = None, words: tuple[str, ...] = ()) -> dict:
    if kind == "string":
        pool = words or _SYLLABLES
        return {"type": "string", "value": rng.choice(pool)}
    if kind == "quantity":
        value: dict = {"type": "quantity", "value": round(rng.uniform(0, 1_000_000), 2)}
        if unit and unit != "1":
            value["unit"] = unit
        return value
    if kind == "year":
        return {"type": "year", "value": rng.randint(1800, 2025)}
    return {"type": "date", "value": _date_string(rng)}


def generate_kb(entity_count: int, seed: int) -> dict:
    """Deterministic synthetic dump with `entity_count` entities."""
    if entity_count < 1:
        raise ValueError("entity_count must be >= 1")
    rng = random.Random(seed)

    concept_count = max(1, round(entity_count * 0.01))
    concepts = {}
    for j in range(concept_count):
        parents = [f"C{rng.randrange(j)}"] if j > 0 and rng.random() < 0.5 else []
        concepts[f"C{j}"] = {"name": f"{_word(rng)} {j}", "subclassOf": parents}

    attr_pool_size = max(6, round(entity_count * 0.000215))
    attr_specs = []
    for _ in range(attr_pool_size):
        kind = rng.choices(("string", "quantity", "year", "date"), weights=(30, 40, 15, 15))[0]
        units: tuple[str, ...] = ()
        words: tuple[str, ...] = ()
        if kind == "quantity":
            units = (rng.choice(_UNITS),)
            if rng.random() < 0.1:
                units = units + (rng.choice([u for u in _UNITS if u not in units]),)
        elif kind == "string":
            words = tuple(_word(rng) for _ in range(30))
        attr_specs.append({"key": _word(rng) + " " + _word(rng), "kind": kind, "units": units, "words": words})

    relation_pool = [f"{_word(rng)} {_word(rng)}" for _ in range(max(4, round(entity_count * 0.000172)))]
    qualifier_keys = [_word(rng) for _ in range(8)]

    def maybe_qualifiers(rng: random.Random) -> dict:
        if rng.random() >= 0.2:
            return {}
        qkey = rng.choice(qualifier_keys)
        kind = rng.choice(_QUALIFIER_KINDS)
        return {qkey: [_value_of_kind(rng, kind)]}

    entities = {}
    names: list[str] = []
    for i in range(entity_count):
        if names and i % 97 == 96:  # occasional duplicate names, on purpose
            name = rng.choice(names)
        else:
            name = f"{_word(rng).title()} {_word(rng).title()} {i}"
        names.append(name)

        tags = sorted({f"C{rng.randrange(concept_count)}" for _ in range(rng.randint(1, 2))})

        attributes = []
        for _ in range(rng.randint(8, 12)):
            spec = rng.choice(attr_specs)
            unit = rng.choice(spec["units"]) if spec["units"] else None
            attributes.append(
                {
                    "key": spec["key"],
                    "value": _value_of_kind(rng, spec["kind"], unit, spec["words"]),
                    "qualifiers": maybe_qualifiers(rng),
                }
            )

        relations = []
        for _ in range(rng.randint(3, 5)):
            target = rng.randrange(entity_count)
            if target == i and entity_count > 1:
                target = (target + 1) % entity_count
            relations.append(
                {
                    "relation": rng.choice(relation_pool),
                    "direction": "backward" if rng.random() < 0.1 else "forward",
                    "object": f"Q{target}",
                    "qualifiers": maybe_qualifiers(rng),
                }
            )

        entities[f"Q{i}"] = {
            "name": name,
            "instanceOf": tags,
            "attributes": attributes,
            "relations": relations,
        }

    return {"concepts": concepts, "entities": entities}


def dump_to_bytes(dump: dict) -> bytes:
    return json.dumps(dump, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")


def write_kb(dump: dict, path: str | Path) -> None:
    Path(path).write_bytes(dump_to_bytes(dump))
