"""Typed literal values (string / quantity / year / date) and their comparison rules.

These literals appear as attribute values and qualifier values in the knowledge
base, and as parsed operator arguments in the engine.  Comparison is a total
function: incompatible kinds or units never match under ``=``, ``<``, ``>``
and always match under ``!=``.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum

UNITLESS = "1"
YEAR_MIN = -(2**31)
YEAR_MAX = 2**31 - 1

COMPARATORS = ("=", "!=", "<", ">")


class ValueKind(str, Enum):
    STRING = "string"
    QUANTITY = "quantity"
    YEAR = "year"
    DATE = "date"


@dataclass(frozen=True, slots=True)
class ValueLiteral:
    """A tagged literal; exactly the fields of the active kind are set."""

    kind: ValueKind
    text: str | None = None
    amount: float | None = None
    unit: str | None = None
    year: int | None = None
    date: dt.date | None = None

    def __post_init__(self) -> None:
        populated = {
            ValueKind.STRING: (self.text is not None, self.amount is None, self.unit is None, self.year is None, self.date is None),
            ValueKind.QUANTITY: (self.amount is not None, self.unit is not None, self.text is None, self.year is None, self.date is None),
            ValueKind.YEAR: (self.year is not None, self.text is None, self.amount is None, self.unit is None, self.date is None),
            ValueKind.DATE: (self.date is not None, self.text is None, self.amount is None, self.unit is None, self.year is None),
        }[self.kind]
        if not all(populated):
            raise ValueError(f"fields do not match literal kind {self.kind.value}")
        if self.kind is ValueKind.YEAR and not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValueError(f"year {self.year} outside signed 32-bit range")


def string_value(text: str) -> ValueLiteral:
    return ValueLiteral(ValueKind.STRING, text=text)


def quantity_value(amount: float, unit: str = UNITLESS) -> ValueLiteral:
    return ValueLiteral(ValueKind.QUANTITY, amount=float(amount), unit=unit)


def year_value(year: int) -> ValueLiteral:
    return ValueLiteral(ValueKind.YEAR, year=int(year))


def date_value(date: dt.date) -> ValueLiteral:
    return ValueLiteral(ValueKind.DATE, date=date)


def _ordered(op: str, lhs, rhs) -> bool:
    if op == "=":
        return lhs == rhs
    if op == "!=":
        return lhs != rhs
    if op == "<":
        return lhs < rhs
    return lhs > rhs


def compare_values(a: ValueLiteral, op: str, b: ValueLiteral) -> bool:
    """Total comparison between two literals.

    Strings support only ``=`` / ``!=``.  Quantities compare only within equal
    units.  Years and dates are mutually comparable: the date side is projected
    to its calendar year.  Any other kind mix is never equal, always unequal,
    and never ordered.
    """
    if op not in COMPARATORS:
        raise ValueError(f"unknown comparator {op!r}")
    ka, kb = a.kind, b.kind
    if ka is ValueKind.STRING and kb is ValueKind.STRING:
        if op == "=":
            return a.text == b.text
        if op == "!=":
            return a.text != b.text
        return False
    if ka is ValueKind.QUANTITY and kb is ValueKind.QUANTITY:
        if a.unit != b.unit:
            return op == "!="
        return _ordered(op, a.amount, b.amount)
    if ka is ValueKind.YEAR and kb is ValueKind.YEAR:
        return _ordered(op, a.year, b.year)
    if ka is ValueKind.DATE and kb is ValueKind.DATE:
        return _ordered(op, a.date, b.date)
    if ka is ValueKind.DATE and kb is ValueKind.YEAR:
        return _ordered(op, a.date.year, b.year)
    if ka is ValueKind.YEAR and kb is ValueKind.DATE:
        return _ordered(op, a.year, b.date.year)
    # Kind mismatch: only "!=" holds.
    return op == "!="


def _format_amount(amount: float) -> str:
    if amount == int(amount):
        return str(int(amount))
    return repr(amount)


def render_value(v: ValueLiteral) -> str:
    """Human-readable rendering, also used for answer strings."""
    if v.kind is ValueKind.STRING:
        return v.text
    if v.kind is ValueKind.QUANTITY:
        if v.unit == UNITLESS:
            return _format_amount(v.amount)
        return f"{_format_amount(v.amount)} {v.unit}"
    if v.kind is ValueKind.YEAR:
        return str(v.year)
    return v.date.isoformat()


class LiteralParseError(ValueError):
    """An argument string could not be parsed into the requested literal kind."""


def parse_quantity(text: str) -> ValueLiteral:
    """Parse ``"<amount> <unit>"``; the unit is optional and may contain spaces."""
    head, _, rest = text.strip().partition(" ")
    try:
        amount = float(head)
    except ValueError:
        raise LiteralParseError(f"not a quantity: {text!r}") from None
    unit = rest.strip() or UNITLESS
    return quantity_value(amount, unit)


def parse_year(text: str) -> ValueLiteral:
    try:
        year = int(text.strip())
    except ValueError:
        raise LiteralParseError(f"not a year: {text!r}") from None
    if not (YEAR_MIN <= year <= YEAR_MAX):
        raise LiteralParseError(f"year out of range: {text!r}")
    return year_value(year)


def parse_date(text: str) -> ValueLiteral:
    cleaned = text.strip().replace("/", "-")
    try:
        return date_value(dt.date.fromisoformat(cleaned))
    except ValueError:
        raise LiteralParseError(f"not a date: {text!r}") from None


def parse_literal(text: str, kind: ValueKind) -> ValueLiteral:
    if kind is ValueKind.STRING:
        return string_value(text)
    if kind is ValueKind.QUANTITY:
        return parse_quantity(text)
    if kind is ValueKind.YEAR:
        return parse_year(text)
    return parse_date(text)


def try_parse_literal(text: str, kind: ValueKind) -> ValueLiteral | None:
    try:
        return parse_literal(text, kind)
    except LiteralParseError:
        return None


_DUMP_KINDS = {k.value: k for k in ValueKind}


def value_from_dump(obj: dict) -> ValueLiteral:
    """Decode a dump value object ``{"type": ..., "value": ..., "unit"?: ...}``."""
    if not isinstance(obj, dict) or "type" not in obj or "value" not in obj:
        raise ValueError(f"malformed value object: {obj!r}")
    kind = _DUMP_KINDS.get(obj["type"])
    if kind is None:
        raise ValueError(f"unknown value type {obj['type']!r}")
    raw = obj["value"]
    if kind is ValueKind.STRING:
        if not isinstance(raw, str):
            raise ValueError(f"string value must be a string, got {raw!r}")
        return string_value(raw)
    if kind is ValueKind.QUANTITY:
        if not isinstance(raw, (int, float)) or isinstance(raw, bool):
            raise ValueError(f"quantity value must be numeric, got {raw!r}")
        return quantity_value(float(raw), obj.get("unit", UNITLESS))
    if kind is ValueKind.YEAR:
        if not isinstance(raw, int) or isinstance(raw, bool):
            raise ValueError(f"year value must be an integer, got {raw!r}")
        return year_value(raw)
    if not isinstance(raw, str):
        raise ValueError(f"date value must be an ISO string, got {raw!r}")
    return parse_date(raw)


def value_to_dump(v: ValueLiteral) -> dict:
    if v.kind is ValueKind.STRING:
        return {"type": "string", "value": v.text}
    if v.kind is ValueKind.QUANTITY:
        out: dict = {"type": "quantity", "value": v.amount}
        if v.unit != UNITLESS:
            out["unit"] = v.unit
        return out
    if v.kind is ValueKind.YEAR:
        return {"type": "year", "value": v.year}
    return {"type": "date", "value": v.date.isoformat()}
