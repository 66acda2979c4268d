"""Operator/developer command line: serve, run, validate, bench, gen-kb, stats.

Machine-readable output is JSON on stdout; human summaries go to stderr.
Exit codes: 0 success, 1 for load/parse/validation/runtime failures, 2 for
usage errors.  ``VISKOP_KB``, ``VISKOP_PORT`` and ``VISKOP_PREVIEW_K``
provide defaults for the corresponding flags.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .backends import BackendKind
from .bench import bench_backends, bench_fusion, bench_latency
from .engine import DEFAULT_PREVIEW_K, ExecutionError, execute, plan_merge
from .indexes import build_indices
from .induction import external_binding, template_binding
from .kb import KBLoadError, kb_stats, load_kb, load_kb_data
from .program import ProgramParseError, parse_program, validate
from .synth import dump_to_bytes, generate_kb


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        return fallback


def _add_kb_flag(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--kb",
        default=os.environ.get("VISKOP_KB"),
        required=required and "VISKOP_KB" not in os.environ,
        help="path to the KB dump (default: $VISKOP_KB)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viskop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the HTTP service")
    _add_kb_flag(serve)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=_env_int("VISKOP_PORT", 8000))
    serve.add_argument("--preview-k", type=int, default=_env_int("VISKOP_PREVIEW_K", DEFAULT_PREVIEW_K))
    serve.add_argument("--backend", choices=[b.value for b in BackendKind], default=BackendKind.HASHING.value)
    serve.add_argument("--parser-url", default=os.environ.get("VISKOP_PARSER_URL"),
                       help="external question parser endpoint (default: template rules)")
    serve.add_argument("--demo-parser", action="store_true",
                       help="template rules that reproduce the classic faulty parse, for debugging walkthroughs")

    run = sub.add_parser("run", help="execute a program file against a KB")
    _add_kb_flag(run)
    run.add_argument("--program", required=True)
    run.add_argument("--trace", action="store_true")
    run.add_argument("--no-fusion", action="store_true", help="skip the FindAll+filter merge rewrite")
    run.add_argument("--preview-k", type=int, default=_env_int("VISKOP_PREVIEW_K", DEFAULT_PREVIEW_K))

    val = sub.add_parser("validate", help="validate a program file")
    val.add_argument("--program", required=True)

    bench = sub.add_parser("bench", help="benchmark backends, fusion, and latency")
    _add_kb_flag(bench, required=False)
    bench.add_argument("--gen-entities", type=int, help="generate a synthetic KB of this size instead of --kb")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--programs", type=int, default=100)
    bench.add_argument("--runs", type=int, default=3, help="repetitions per backend (median reported)")
    bench.add_argument("--suite", choices=["backends", "fusion", "latency", "all"], default="all")
    bench.add_argument("--workload", help="JSON file with a list of program documents")

    gen = sub.add_parser("gen-kb", help="emit a synthetic KB dump")
    gen.add_argument("--entities", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output path (default: stdout)")

    stats = sub.add_parser("stats", help="print KB statistics")
    _add_kb_flag(stats)
    return parser


def _load(path: str):
    kb = load_kb(path)
    print(f"loaded {len(kb.entities)} entities from {path}", file=sys.stderr)
    return kb


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    kb = _load(args.kb)
    idx = build_indices(kb, BackendKind(args.backend))
    if args.parser_url:
        binding = external_binding(args.parser_url)
    else:
        binding = template_binding(demo=args.demo_parser)
    state = ServiceState(kb=kb, idx=idx, binding=binding, preview_k=args.preview_k)
    uvicorn.run(create_app(state), host=args.host, port=args.port, log_level="warning")
    return 0


def _read_program(path: str):
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise KBLoadError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProgramParseError(f"malformed JSON in {path}: {exc}") from None
    return parse_program(document)


def _cmd_run(args) -> int:
    kb = _load(args.kb)
    idx = build_indices(kb)
    program = _read_program(args.program)
    report = validate(program)
    if not report.ok:
        print(json.dumps(report.to_dict()))
        print("program failed validation", file=sys.stderr)
        return 1
    plan = program if args.no_fusion else plan_merge(program)
    try:
        result = execute(kb, idx, plan, trace=args.trace, preview_k=args.preview_k)
    except ExecutionError as exc:
        print(json.dumps({"error": exc.message, "node_index": exc.node_index, "code": exc.code}))
        print(f"runtime error at node {exc.node_index}: {exc.message}", file=sys.stderr)
        return 1
    print(result.answer)
    if result.trace is not None:
        print(json.dumps([entry.to_dict() for entry in result.trace]))
    return 0


def _cmd_validate(args) -> int:
    program = _read_program(args.program)
    report = validate(program)
    print(json.dumps(report.to_dict()))
    return 0 if report.ok else 1


def _cmd_bench(args) -> int:
    if args.gen_entities is not None:
        if args.gen_entities < 1:
            raise UsageError("--gen-entities must be >= 1")
        print(f"generating synthetic KB with {args.gen_entities} entities", file=sys.stderr)
        kb = load_kb_data(generate_kb(args.gen_entities, args.seed), source=f"synthetic({args.gen_entities},{args.seed})")
    elif args.kb:
        kb = _load(args.kb)
    else:
        raise UsageError("bench needs --kb or --gen-entities")

    from .genprog import generate_filter_chain, generate_mixed_workload, sample_schema

    rng = random.Random(args.seed)
    schema = sample_schema(kb)
    if args.workload:
        documents = json.loads(Path(args.workload).read_text(encoding="utf-8"))
        fusion_documents = documents
    else:
        documents = generate_mixed_workload(schema, rng, args.programs)
        fusion_documents = [generate_filter_chain(schema, rng) for _ in range(args.programs)]

    report: dict = {"entities": len(kb.entities), "seed": args.seed}
    idx = build_indices(kb)
    if args.suite in ("backends", "all"):
        print("benchmarking index backends", file=sys.stderr)
        report["backends"] = bench_backends(kb, documents, runs=args.runs)
    if args.suite in ("fusion", "all"):
        print("benchmarking operator fusion", file=sys.stderr)
        report["fusion"] = bench_fusion(kb, idx, fusion_documents)
    if args.suite in ("latency", "all"):
        print("benchmarking request latency", file=sys.stderr)
        report["latency"] = bench_latency(kb, idx, documents)
    print(json.dumps(report, indent=2))
    return 0


def _cmd_gen_kb(args) -> int:
    if args.entities < 1:
        raise UsageError("--entities must be >= 1")
    payload = dump_to_bytes(generate_kb(args.entities, args.seed))
    if args.out:
        Path(args.out).write_bytes(payload)
        print(f"wrote {len(payload)} bytes to {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.write(b"\n")
    return 0


def _cmd_stats(args) -> int:
    kb = _load(args.kb)
    print(json.dumps(kb_stats(kb).to_dict()))
    return 0


class UsageError(Exception):
    pass


_COMMANDS = {
    "serve": _cmd_serve,
    "run": _cmd_run,
    "validate": _cmd_validate,
    "bench": _cmd_bench,
    "gen-kb": _cmd_gen_kb,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (KBLoadError, ProgramParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
