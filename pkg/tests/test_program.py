import pytest

from viskop import (
    ProgramParseError,
    SIGNATURES,
    execution_order,
    parse_program,
    serialize_program,
    validate,
)


def node(function, inputs=(), dependencies=()):
    return {"function": function, "inputs": list(inputs), "dependencies": list(dependencies)}


def test_inventory_has_27_operators():
    assert len(SIGNATURES) == 27
    categories = {sig.category for sig in SIGNATURES.values()}
    assert categories == {"query", "filter", "verification", "selection", "set"}


def test_parse_canonical_document(faulty_doc):
    program = parse_program(faulty_doc)
    assert len(program) == 8
    # "[-1, -1]" and missing/empty lists all mean "no dependencies".
    assert program.nodes[0].dependencies == ()
    assert program.nodes[3].dependencies == ()
    assert program.root == 7
    assert program.nodes[7].function == "Count"


def test_parse_rejects_empty_and_malformed():
    with pytest.raises(ProgramParseError, match="empty"):
        parse_program([])
    with pytest.raises(ProgramParseError, match="unknown function"):
        parse_program([node("Teleport")])
    with pytest.raises(ProgramParseError, match="out of range"):
        parse_program([node("Count", dependencies=[5])])
    with pytest.raises(ProgramParseError, match="itself"):
        parse_program([node("Count", dependencies=[0])])
    with pytest.raises(ProgramParseError, match="list of strings"):
        parse_program([node("Find", inputs=[3])])


def test_forward_references_allowed_if_acyclic():
    program = parse_program(
        [
            node("Count", dependencies=[1]),
            node("FindAll"),
        ]
    )
    assert validate(program).ok
    assert execution_order(program) == [1, 0]


def test_validate_passes_canonical_program(faulty_doc, corrected_doc):
    assert validate(parse_program(faulty_doc)).ok
    assert validate(parse_program(corrected_doc)).ok


def test_count_into_qfilter_rejected():
    from conftest import read_fixture

    program = parse_program(read_fixture("count_into_qfilter.json"))
    report = validate(program)
    assert not report.ok
    errors = [d for d in report.diagnostics if d.severity == "error"]
    assert len(errors) == 1
    assert errors[0].node == 2
    assert "INT not acceptable" in errors[0].message
    assert "ENTITY_SET_WITH_FACTS" in errors[0].message


def test_two_roots_rejected():
    program = parse_program([node("Find", ["A"]), node("Find", ["B"]), node("Count", dependencies=[1])])
    report = validate(program)
    assert not report.ok
    assert any(d.node == 0 and "orphan" in d.message for d in report.diagnostics)


def test_double_consumption_rejected():
    program = parse_program(
        [node("FindAll"), node("Count", dependencies=[0]), node("QueryName", dependencies=[0])]
    )
    report = validate(program)
    assert not report.ok
    assert any(d.node == 0 and "consumed 2 times" in d.message for d in report.diagnostics)


def test_arity_violations_reported():
    program = parse_program([node("Find", inputs=[])])
    report = validate(program)
    assert any("argument" in d.message for d in report.diagnostics)
    program = parse_program([node("Count", inputs=[], dependencies=[])])
    report = validate(program)
    assert any("dependency input" in d.message for d in report.diagnostics)


def test_qfilter_on_plain_entity_set_rejected():
    program = parse_program(
        [
            node("FindAll"),
            node("QFilterStr", inputs=["q", "v"], dependencies=[0]),
        ]
    )
    report = validate(program)
    assert not report.ok
    assert any("ENTITY_SET not acceptable" in d.message for d in report.diagnostics)


def test_entity_set_with_facts_widens():
    # Facts-carrying sets are fine where plain entity sets are required...
    program = parse_program(
        [
            node("Find", ["X"]),
            node("Relate", ["knows", "forward"], [0]),
            node("Count", dependencies=[1]),
        ]
    )
    assert validate(program).ok
    # ...and FilterConcept's output kind follows its input.
    program = parse_program(
        [
            node("Find", ["X"]),
            node("Relate", ["knows", "forward"], [0]),
            node("FilterConcept", ["c"], [1]),
            node("QFilterStr", ["q", "v"], [2]),
        ]
    )
    assert validate(program).ok


def test_all_violations_reported_not_just_first():
    program = parse_program(
        [
            node("Find", []),  # bad arity
            node("FindAll"),
            node("Count", dependencies=[1]),
            node("QFilterStr", inputs=["q", "v"], dependencies=[2]),  # bad kind
        ]
    )
    report = validate(program)
    flagged = {d.node for d in report.diagnostics if d.severity == "error"}
    assert {0, 3} <= flagged


def test_execution_order_trivial_and_chain():
    assert execution_order(parse_program([node("FindAll")])) == [0]
    chain = parse_program(
        [node("FindAll"), node("FilterConcept", ["c"], [0]), node("Count", dependencies=[1])]
    )
    assert execution_order(chain) == [0, 1, 2]


def test_execution_order_ends_at_root(faulty_doc):
    program = parse_program(faulty_doc)
    assert execution_order(program)[-1] == 7


def test_serialize_normalizes(faulty_doc):
    program = parse_program(faulty_doc)
    document = serialize_program(program)
    assert len(document) == 8
    assert document[0]["dependencies"] == []  # -1 sentinels are gone
    assert parse_program(document) == program


def test_serialize_parse_round_trip_is_idempotent(corrected_doc):
    once = serialize_program(parse_program(corrected_doc))
    twice = serialize_program(parse_program(once))
    assert once == twice
