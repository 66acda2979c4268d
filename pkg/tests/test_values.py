import datetime as dt

import pytest

from viskop.values import (
    LiteralParseError,
    ValueKind,
    ValueLiteral,
    compare_values,
    date_value,
    parse_date,
    parse_quantity,
    parse_year,
    quantity_value,
    render_value,
    string_value,
    value_from_dump,
    value_to_dump,
    year_value,
)


def test_kind_fields_are_enforced():
    with pytest.raises(ValueError):
        ValueLiteral(ValueKind.STRING, text="x", amount=1.0)
    with pytest.raises(ValueError):
        ValueLiteral(ValueKind.QUANTITY, amount=1.0)  # missing unit
    with pytest.raises(ValueError):
        year_value(2**31)


def test_quantity_comparisons_within_unit():
    a = quantity_value(357022, "km²")
    b = quantity_value(100000, "km²")
    assert compare_values(a, ">", b)
    assert not compare_values(a, "<", b)
    assert not compare_values(a, "=", b)
    assert compare_values(a, "!=", b)


def test_unit_mismatch_never_matches():
    kg = quantity_value(5, "kg")
    m = quantity_value(5, "m")
    assert not compare_values(kg, "=", m)
    assert compare_values(kg, "!=", m)
    assert not compare_values(kg, "<", m)
    assert not compare_values(kg, ">", m)


def test_date_vs_year_projection():
    d = date_value(dt.date(2020, 6, 1))
    y = year_value(2020)
    assert compare_values(d, "=", y)
    assert compare_values(y, "=", d)
    assert compare_values(d, "<", year_value(2021))
    assert compare_values(year_value(2019), "<", d)
    assert not compare_values(d, ">", y)


def test_kind_mismatch_is_total():
    s = string_value("hello")
    q = quantity_value(5, "kg")
    assert not compare_values(s, "=", q)
    assert compare_values(s, "!=", q)
    assert not compare_values(q, "<", s)
    assert not compare_values(s, ">", q)


def test_string_ordering_unsupported():
    a, b = string_value("a"), string_value("b")
    assert not compare_values(a, "<", b)
    assert not compare_values(a, ">", b)
    assert compare_values(a, "=", string_value("a"))


def test_rendering():
    assert render_value(quantity_value(357022, "km²")) == "357022 km²"
    assert render_value(quantity_value(1.5, "kg")) == "1.5 kg"
    assert render_value(quantity_value(42)) == "42"
    assert render_value(year_value(1871)) == "1871"
    assert render_value(date_value(dt.date(2020, 6, 1))) == "2020-06-01"
    assert render_value(string_value("x")) == "x"


def test_argument_parsing():
    assert parse_quantity("357022 km²") == quantity_value(357022, "km²")
    assert parse_quantity("42") == quantity_value(42)
    assert parse_quantity("9.5 square kilometre") == quantity_value(9.5, "square kilometre")
    assert parse_year("-44") == year_value(-44)
    assert parse_date("2020-06-01") == date_value(dt.date(2020, 6, 1))
    assert parse_date("2020/06/01") == date_value(dt.date(2020, 6, 1))
    for bad, parser in [("abc", parse_quantity), ("12.5", parse_year), ("June 1", parse_date)]:
        with pytest.raises(LiteralParseError):
            parser(bad)


def test_dump_round_trip():
    originals = [
        string_value("x"),
        quantity_value(30528, "km²"),
        quantity_value(7),
        year_value(1871),
        date_value(dt.date(1999, 12, 31)),
    ]
    for v in originals:
        assert value_from_dump(value_to_dump(v)) == v


def test_dump_rejects_malformed():
    with pytest.raises(ValueError):
        value_from_dump({"type": "quantity", "value": "not a number"})
    with pytest.raises(ValueError):
        value_from_dump({"type": "mystery", "value": 1})
    with pytest.raises(ValueError):
        value_from_dump({"value": 1})
