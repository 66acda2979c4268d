"""Benchmark harness: backend comparison, fusion speedup, latency distribution.

All timings are wall-clock over already-loaded KBs; KB load and index build
never count toward reported query time.
"""

from __future__ import annotations

import math
import platform
import statistics
import sys
import time
from dataclasses import dataclass

from .backends import BackendKind
from .engine import execute, plan_merge
from .indexes import IndexSet, build_indices
from .kb import KnowledgeBase
from .program import Program, parse_program, validate


@dataclass(slots=True)
class PreparedWorkload:
    programs: list[Program]
    skipped: int


def prepare_workload(documents: list[list[dict]]) -> PreparedWorkload:
    """Parse and validate workload documents; invalid ones are counted and skipped."""
    programs: list[Program] = []
    skipped = 0
    for document in documents:
        try:
            program = parse_program(document)
        except Exception:
            skipped += 1
            continue
        if not validate(program).ok:
            skipped += 1
            continue
        programs.append(program)
    return PreparedWorkload(programs=programs, skipped=skipped)


def _run_workload(kb: KnowledgeBase, idx: IndexSet, plans: list[Program]) -> float:
    """Total wall time (ms) to execute all plans once, single-threaded."""
    started = time.perf_counter()
    for plan in plans:
        try:
            execute(kb, idx, plan)
        except Exception:
            pass  # runtime failures still cost and count as executed queries
    return (time.perf_counter() - started) * 1000.0


def bench_backends(kb: KnowledgeBase, documents: list[list[dict]], runs: int = 3) -> dict:
    """Median-of-`runs` workload wall time per index backend, plus the argmin.

    Ties (including the empty workload) resolve to the earliest backend in
    enum order.
    """
    workload = prepare_workload(documents)
    results = []
    best: tuple[float, int] | None = None
    for position, backend in enumerate(BackendKind):
        idx = build_indices(kb, backend)
        plans = [plan_merge(p) for p in workload.programs]
        times = [_run_workload(kb, idx, plans) for _ in range(runs)]
        wall = statistics.median(times) if workload.programs else 0.0
        results.append(
            {"backend": backend.value, "wall_time_ms": round(wall, 3), "queries": len(plans)}
        )
        if best is None or wall < best[0]:
            best = (wall, position)
    return {
        "results": results,
        "argmin": list(BackendKind)[best[1]].value,
        "skipped": workload.skipped,
        "runs": runs,
    }


def bench_fusion(kb: KnowledgeBase, idx: IndexSet, documents: list[list[dict]]) -> dict:
    """Per-program latency with and without the FindAll+filter merge rewrite."""
    workload = prepare_workload(documents)
    fused_ms: list[float] = []
    plain_ms: list[float] = []
    for program in workload.programs:
        merged = plan_merge(program)
        t0 = time.perf_counter()
        execute(kb, idx, merged)
        fused_ms.append((time.perf_counter() - t0) * 1000.0)
        t0 = time.perf_counter()
        execute(kb, idx, program)
        plain_ms.append((time.perf_counter() - t0) * 1000.0)
    fused_median = statistics.median(fused_ms) if fused_ms else 0.0
    plain_median = statistics.median(plain_ms) if plain_ms else 0.0
    return {
        "queries": len(workload.programs),
        "skipped": workload.skipped,
        "fused_median_ms": round(fused_median, 3),
        "unfused_median_ms": round(plain_median, 3),
        "speedup": round(plain_median / fused_median, 2) if fused_median > 0 else None,
    }


def percentile(sorted_values: list[float], q: float) -> float:
    """Nearest-rank percentile of an ascending list."""
    if not sorted_values:
        return 0.0
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def bench_latency(kb: KnowledgeBase, idx: IndexSet, documents: list[list[dict]], bins: int = 20) -> dict:
    """Latency distribution for the full request pipeline (parse through execute)."""
    samples: list[float] = []
    skipped = 0
    total_start = time.perf_counter()
    for document in documents:
        t0 = time.perf_counter()
        try:
            program = parse_program(document)
        except Exception:
            skipped += 1
            continue
        if not validate(program).ok:
            skipped += 1
            continue
        try:
            execute(kb, idx, plan_merge(program))
        except Exception:
            pass  # runtime errors are still answered requests
        samples.append((time.perf_counter() - t0) * 1000.0)
    total_wall_ms = (time.perf_counter() - total_start) * 1000.0

    ordered = sorted(samples)
    top = ordered[-1] if ordered else 0.0
    width = top / bins if top > 0 else 1.0
    counts = [0] * bins
    for value in samples:
        counts[min(bins - 1, int(value / width))] += 1
    return {
        "queries": len(samples),
        "skipped": skipped,
        "percentiles_ms": {
            "p50": round(percentile(ordered, 0.50), 3),
            "p90": round(percentile(ordered, 0.90), 3),
            "p95": round(percentile(ordered, 0.95), 3),
            "p99": round(percentile(ordered, 0.99), 3),
        },
        "histogram": {
            "bin_width_ms": round(width, 4),
            "edges_ms": [round(i * width, 4) for i in range(bins + 1)],
            "counts": counts,
        },
        "sum_query_ms": round(sum(samples), 3),
        "total_wall_ms": round(total_wall_ms, 3),
        "machine": {
            "platform": platform.platform(),
            "processor": platform.processor() or platform.machine(),
            "python": sys.version.split()[0],
        },
    }
