"""viskop: an interactive workbench for KoPL knowledge-base queries.

Typical embedded use::

    from viskop import load_kb, build_indices, parse_program, validate, plan_merge, execute

    kb = load_kb("kb.json")
    idx = build_indices(kb)
    program = parse_program(document)
    assert validate(program).ok
    result = execute(kb, idx, plan_merge(program), trace=True)
"""

from .backends import BackendKind
from .engine import ExecutionError, ExecutionResult, TraceEntry, execute, plan_merge, render_answer
from .indexes import IndexSet, build_indices, complete, lookup_attribute
from .kb import (
    KBLoadError,
    KnowledgeBase,
    concept_descendants,
    dump_kb,
    kb_stats,
    load_kb,
    load_kb_data,
    resolve_entity_name,
)
from .program import (
    OperatorNode,
    OutputKind,
    Program,
    ProgramParseError,
    SIGNATURES,
    ValidationReport,
    execution_order,
    parse_program,
    serialize_program,
    validate,
)
from .values import ValueKind, ValueLiteral, compare_values, render_value

__version__ = "0.1.0"

__all__ = [
    "BackendKind",
    "ExecutionError",
    "ExecutionResult",
    "IndexSet",
    "KBLoadError",
    "KnowledgeBase",
    "OperatorNode",
    "OutputKind",
    "Program",
    "ProgramParseError",
    "SIGNATURES",
    "TraceEntry",
    "ValidationReport",
    "ValueKind",
    "ValueLiteral",
    "build_indices",
    "compare_values",
    "complete",
    "concept_descendants",
    "dump_kb",
    "execute",
    "execution_order",
    "kb_stats",
    "load_kb",
    "load_kb_data",
    "lookup_attribute",
    "parse_program",
    "plan_merge",
    "render_answer",
    "render_value",
    "resolve_entity_name",
    "serialize_program",
    "validate",
]
