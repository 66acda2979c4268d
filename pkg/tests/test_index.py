import random

import pytest

from viskop import build_indices, complete, load_kb_data, lookup_attribute
from viskop.backends import BackendKind
from viskop.values import compare_values, parse_date, quantity_value, string_value, year_value


def entity(name, instance_of=(), attributes=()):
    return {"name": name, "instanceOf": list(instance_of), "attributes": list(attributes), "relations": []}


def quantity_attr(key, amount, unit="km²"):
    return {"key": key, "value": {"type": "quantity", "value": amount, "unit": unit}}


AREAS_KB = load_kb_data(
    {
        "concepts": {},
        "entities": {
            "Q_de": entity("Germany", attributes=[quantity_attr("area", 357022)]),
            "Q_fr": entity("France", attributes=[quantity_attr("area", 551695)]),
            "Q_be": entity("Belgium", attributes=[quantity_attr("area", 30528)]),
        },
    }
)
AREAS_IDX = build_indices(AREAS_KB)


def test_greater_than_lookup():
    pairs = lookup_attribute(AREAS_IDX, "area", ">", quantity_value(100000, "km²"))
    assert {eid for eid, _ in pairs} == {"Q_de", "Q_fr"}


def test_exact_lookup():
    pairs = lookup_attribute(AREAS_IDX, "area", "=", quantity_value(30528, "km²"))
    assert [eid for eid, _ in pairs] == ["Q_be"]


def test_unknown_key_is_empty():
    assert lookup_attribute(AREAS_IDX, "motto", "=", string_value("x")) == []


def test_unit_mismatch_is_empty():
    assert lookup_attribute(AREAS_IDX, "area", ">", quantity_value(1, "mi²")) == []
    not_equal = lookup_attribute(AREAS_IDX, "area", "!=", quantity_value(30528, "mi²"))
    assert {eid for eid, _ in not_equal} == {"Q_de", "Q_fr", "Q_be"}


def test_mixed_units_are_partitioned():
    kb = load_kb_data(
        {
            "concepts": {},
            "entities": {
                "Q1": entity("A", attributes=[quantity_attr("area", 10, "km²")]),
                "Q2": entity("B", attributes=[quantity_attr("area", 10, "mi²")]),
            },
        }
    )
    idx = build_indices(kb)
    assert set(idx.attr_quantity_index) == {("area", "km²"), ("area", "mi²")}
    assert [e for e, _ in lookup_attribute(idx, "area", "=", quantity_value(10, "mi²"))] == ["Q2"]


def test_year_date_projection_lookup():
    kb = load_kb_data(
        {
            "concepts": {},
            "entities": {
                "Q1": entity("A", attributes=[{"key": "when", "value": {"type": "date", "value": "2020-06-01"}}]),
                "Q2": entity("B", attributes=[{"key": "when", "value": {"type": "year", "value": 2019}}]),
            },
        }
    )
    idx = build_indices(kb)
    assert {e for e, _ in lookup_attribute(idx, "when", "=", year_value(2020))} == {"Q1"}
    assert {e for e, _ in lookup_attribute(idx, "when", "<", year_value(2020))} == {"Q2"}
    assert {e for e, _ in lookup_attribute(idx, "when", ">", parse_date("2019-01-01"))} == {"Q1"}
    assert {e for e, _ in lookup_attribute(idx, "when", "=", parse_date("2019-07-01"))} == {"Q2"}


def test_empty_kb_indices():
    idx = build_indices(load_kb_data({"concepts": {}, "entities": {}}))
    assert idx.attr_by_key == {}
    assert idx.concept_extension == {}
    assert complete(idx, "entity", "", 5) == []


def test_concept_extension(borders_kb, borders_idx):
    assert set(borders_idx.concept_extension["Q_country"]) == set(borders_kb.entities)


def test_concept_extension_includes_subclasses():
    kb = load_kb_data(
        {
            "concepts": {
                "A": {"name": "vehicle", "subclassOf": []},
                "B": {"name": "car", "subclassOf": ["A"]},
            },
            "entities": {"Q1": entity("X", instance_of=["B"])},
        }
    )
    idx = build_indices(kb)
    assert idx.concept_extension["A"] == ("Q1",)


def test_completion_relation_prefix(borders_idx):
    assert complete(borders_idx, "relation", "share", 10) == ["shares border with"]


def test_completion_concept(borders_idx):
    assert complete(borders_idx, "concept", "coun", 5) == ["country"]


def test_completion_empty_prefix_respects_limit(borders_idx):
    names = complete(borders_idx, "entity", "", 3)
    assert names == ["Austria", "Belgium", "France"]


def test_completion_ranks_prefix_before_substring():
    kb = load_kb_data(
        {
            "concepts": {},
            "entities": {
                "Q1": entity("Land of Oz"),
                "Q2": entity("Lander"),
                "Q3": entity("Iceland"),
                "Q4": entity("LAND"),
            },
        }
    )
    idx = build_indices(kb)
    assert complete(idx, "entity", "land", 10) == ["LAND", "Land of Oz", "Lander", "Iceland"]
    assert complete(idx, "entity", "land", 2) == ["LAND", "Land of Oz"]


def test_completion_unknown_kind(borders_idx):
    with pytest.raises(ValueError):
        complete(borders_idx, "galaxy", "x", 5)
    with pytest.raises(ValueError):
        complete(borders_idx, "entity", "x", 0)


def test_completion_prefix_closure(borders_idx):
    # Everything listed for "shar" that starts with "share" also shows up for "share".
    broad = complete(borders_idx, "relation", "shar", 50)
    narrow = complete(borders_idx, "relation", "share", 50)
    for name in broad:
        if name.lower().startswith("share"):
            assert name in narrow


def _random_kb(rng: random.Random, entities: int):
    units = ["km²", "kg"]
    words = ["red", "blue", "green"]
    out = {}
    for i in range(entities):
        attributes = []
        for _ in range(rng.randint(0, 4)):
            kind = rng.choice(["string", "quantity", "year", "date"])
            key = rng.choice(["size", "color", "born"])
            if kind == "string":
                value = {"type": "string", "value": rng.choice(words)}
            elif kind == "quantity":
                value = {"type": "quantity", "value": rng.randint(0, 50), "unit": rng.choice(units)}
            elif kind == "year":
                value = {"type": "year", "value": rng.randint(1990, 2030)}
            else:
                value = {"type": "date", "value": f"{rng.randint(1990, 2030)}-06-{rng.randint(10, 28)}"}
            attributes.append({"key": key, "value": value})
        out[f"Q{i}"] = entity(f"E{i}", attributes=attributes)
    return load_kb_data({"concepts": {}, "entities": out})


def test_lookup_matches_brute_force_scan():
    rng = random.Random(42)
    for _ in range(25):
        kb = _random_kb(rng, rng.randint(1, 30))
        idx = build_indices(kb)
        for _ in range(40):
            key = rng.choice(["size", "color", "born"])
            op = rng.choice(["=", "!=", "<", ">"])
            kind = rng.choice(["string", "quantity", "year", "date"])
            if kind == "string":
                if op in ("<", ">"):
                    continue
                target = string_value(rng.choice(["red", "blue", "zzz"]))
            elif kind == "quantity":
                target = quantity_value(rng.randint(0, 50), rng.choice(["km²", "kg"]))
            elif kind == "year":
                target = year_value(rng.randint(1990, 2030))
            else:
                target = parse_date(f"{rng.randint(1990, 2030)}-06-15")
            expected = set()
            for eid in kb.sorted_entity_ids:
                for fact in kb.entities[eid].literal_facts:
                    if fact.key == key and compare_values(fact.value, op, target):
                        expected.add((eid, fact.ordinal))
            got = {(eid, fact.ordinal) for eid, fact in lookup_attribute(idx, key, op, target)}
            assert got == expected, (key, op, target)


def test_backend_equivalence_small(borders_kb):
    queries = [
        ("area", ">", quantity_value(100000, "km²")),
        ("area", "=", quantity_value(2586, "km²")),
        ("area", "!=", quantity_value(2586, "km²")),
    ]
    reference = None
    for kind in BackendKind:
        idx = build_indices(borders_kb, kind)
        got = [
            {(e, f.ordinal) for e, f in lookup_attribute(idx, key, op, target)}
            for key, op, target in queries
        ]
        names = [idx.name_index.get("Germany"), idx.name_index.get("Atlantis")]
        completes = complete(idx, "entity", "l", 10)
        snapshot = (got, names, completes)
        if reference is None:
            reference = snapshot
        assert snapshot == reference, kind


def test_build_is_deterministic(borders_kb):
    a = build_indices(borders_kb, BackendKind.TRIE)
    b = build_indices(borders_kb, BackendKind.TRIE)
    assert list(a.name_index.items()) == list(b.name_index.items())
    assert a.concept_extension == b.concept_extension
