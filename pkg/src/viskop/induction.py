"""Natural-language question to program binding.

The real parser is expected to live behind an HTTP endpoint (``external``
mode); the built-in ``template`` mode is a deterministic regex fallback whose
capture slots are resolved against the completion index.  A separate demo rule
set reproduces the classic parser mistakes (Or instead of And, a wrong relation
name) so the debugging walkthrough can be exercised without a model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import httpx

from .indexes import IndexSet, complete
from .program import Program, parse_program, validate


class UnparsedQuestionError(Exception):
    """No rule matched / the remote parser failed; the UI offers a blank canvas."""


_Builder = Callable[..., list[dict]]


@dataclass(frozen=True, slots=True)
class TemplateRule:
    pattern: re.Pattern
    # slot schema kinds, one per capture group: entity/concept/relation/attribute/None
    slot_kinds: tuple[str | None, ...]
    build: _Builder


@dataclass(frozen=True, slots=True)
class ParserBinding:
    mode: str  # "template" | "external"
    rules: tuple[TemplateRule, ...] = ()
    endpoint: str | None = None
    timeout: float = 10.0

    def __post_init__(self) -> None:
        if self.mode == "external":
            if not self.endpoint or self.rules:
                raise ValueError("external mode needs an endpoint and no rules")
        elif self.mode == "template":
            if self.endpoint:
                raise ValueError("template mode takes no endpoint")
        else:
            raise ValueError(f"unknown parser mode {self.mode!r}")


def _node(function: str, inputs: list[str], dependencies: list[int]) -> dict:
    return {"function": function, "inputs": inputs, "dependencies": dependencies}


def _depluralize(word: str) -> list[str]:
    candidates = [word]
    if word.endswith("ies"):
        candidates.append(word[:-3] + "y")
    if word.endswith("es"):
        candidates.append(word[:-2])
    if word.endswith("s"):
        candidates.append(word[:-1])
    return candidates


def _resolve_slot(idx: IndexSet, kind: str | None, captured: str) -> str:
    """Resolve a captured phrase to a canonical schema name where possible."""
    captured = captured.strip()
    if kind is None:
        return captured
    forms = _depluralize(captured) if kind == "concept" else [captured]
    for form in forms:
        candidates = complete(idx, kind, form, 1)
        if candidates and candidates[0].lower() == form.lower():
            return candidates[0]
    for form in forms:
        candidates = complete(idx, kind, form, 1)
        if candidates:
            return candidates[0]
    return captured


def _build_borders_both(concept: str, first: str, second: str) -> list[dict]:
    return [
        _node("Find", [first], []),
        _node("Relate", ["shares border with", "forward"], [0]),
        _node("FilterConcept", [concept], [1]),
        _node("Find", [second], []),
        _node("Relate", ["shares border with", "forward"], [3]),
        _node("FilterConcept", [concept], [4]),
        _node("And", [], [2, 5]),
        _node("Count", [], [6]),
    ]


def _build_borders_both_demo(concept: str, first: str, second: str) -> list[dict]:
    # Mimics the characteristic parser mistakes: the set union instead of the
    # intersection, and a wrong relation on the second branch.
    return [
        _node("Find", [second], []),
        _node("Relate", ["shares border with", "backward"], [0]),
        _node("FilterConcept", [concept], [1]),
        _node("Find", [first], []),
        _node("Relate", ["statement is subject of", "forward"], [3]),
        _node("FilterConcept", [concept], [4]),
        _node("Or", [], [2, 5]),
        _node("Count", [], [6]),
    ]


def _build_count_concept(concept: str) -> list[dict]:
    return [
        _node("FindAll", [], []),
        _node("FilterConcept", [concept], [0]),
        _node("Count", [], [1]),
    ]


def _build_query_attr(attribute: str, entity: str) -> list[dict]:
    return [
        _node("Find", [entity], []),
        _node("QueryAttr", [attribute], [0]),
    ]


_BORDERS_PATTERN = re.compile(
    r"^how many (.+?) shares? borders? with both (.+?) and (.+?)\??$", re.IGNORECASE
)
_COUNT_PATTERN = re.compile(r"^how many (.+?) are there\??$", re.IGNORECASE)
_ATTR_PATTERN = re.compile(r"^what is the (.+?) of (.+?)\??$", re.IGNORECASE)


def default_rules() -> tuple[TemplateRule, ...]:
    return (
        TemplateRule(_BORDERS_PATTERN, ("concept", "entity", "entity"), _build_borders_both),
        TemplateRule(_COUNT_PATTERN, ("concept",), _build_count_concept),
        TemplateRule(_ATTR_PATTERN, ("attribute", "entity"), _build_query_attr),
    )


def demo_rules() -> tuple[TemplateRule, ...]:
    return (
        TemplateRule(_BORDERS_PATTERN, ("concept", "entity", "entity"), _build_borders_both_demo),
    ) + default_rules()[1:]


def template_binding(demo: bool = False) -> ParserBinding:
    return ParserBinding(mode="template", rules=demo_rules() if demo else default_rules())


def external_binding(endpoint: str, timeout: float = 10.0) -> ParserBinding:
    return ParserBinding(mode="external", endpoint=endpoint, timeout=timeout)


def parse_question(binding: ParserBinding, idx: IndexSet, question: str) -> Program:
    """Turn a question into a validated program, or raise UnparsedQuestionError."""
    question = question.strip()
    if not question:
        raise ValueError("question must be non-empty")
    if binding.mode == "external":
        document = _fetch_remote(binding, question)
    else:
        document = _apply_rules(binding, idx, question)
    try:
        program = parse_program(document)
    except Exception as exc:
        raise UnparsedQuestionError(f"parser returned a malformed program: {exc}") from None
    report = validate(program)
    if not report.ok:
        details = "; ".join(d.message for d in report.diagnostics if d.severity == "error")
        raise UnparsedQuestionError(f"parser returned an invalid program: {details}")
    return program


def _apply_rules(binding: ParserBinding, idx: IndexSet, question: str) -> list[dict]:
    for rule in binding.rules:
        match = rule.pattern.match(question.strip())
        if match is None:
            continue
        slots = [
            _resolve_slot(idx, kind, captured)
            for kind, captured in zip(rule.slot_kinds, match.groups())
        ]
        return rule.build(*slots)
    raise UnparsedQuestionError(f"no template matches: {question!r}")


def _fetch_remote(binding: ParserBinding, question: str) -> list[dict]:
    try:
        response = httpx.post(
            binding.endpoint, json={"question": question}, timeout=binding.timeout
        )
        response.raise_for_status()
        payload = response.json()
    except httpx.HTTPError as exc:
        raise UnparsedQuestionError(f"remote parser unreachable: {exc}") from None
    if not isinstance(payload, dict) or "program" not in payload:
        raise UnparsedQuestionError("remote parser response is missing 'program'")
    return payload["program"]
