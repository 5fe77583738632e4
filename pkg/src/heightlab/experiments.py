"""Batch experiments: random instances of the semistable lower bound and of drift.

Instance ``i`` of a suite with seed ``s`` draws from ``random.Random(s * 1_000_003 + i)``,
so results do not depend on how instances are spread over workers.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, partial

from .hermlat import arakelov_degree
from .heights import adjoint_drift_certificate, drift_sequence, rep_constant, theorem1_check
from .instances import random_lattice, random_nilpotent, random_semistable_trace_zero
from .loglin import LogValue, lv_to_float
from .reps import Adjoint
from .semistab import PointInP, adjoint_invariants, instability_search, verify_certificate


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


@lru_cache(maxsize=None)
def _adjoint_constant(n: int):
    return rep_constant(Adjoint(n), adjoint_invariants(n), samples=0)


@dataclass(frozen=True)
class Theorem1Record:
    index: int
    n: int
    satisfied: bool
    height: LogValue
    degree: LogValue
    margin: float


def theorem1_instance(index: int, seed: int, ns: tuple[int, ...] = (2, 3)) -> Theorem1Record:
    rng = instance_rng(seed, index)
    n = ns[index % len(ns)]
    lat = random_lattice(rng, n)
    x = random_semistable_trace_zero(rng, n)
    p = PointInP.from_adjoint_matrix(x)
    rep = Adjoint(n)
    report = theorem1_check(lat, rep, p, adjoint_invariants(n), _adjoint_constant(n), check_invariants=False)
    return Theorem1Record(index, n, report.satisfied, report.height, arakelov_degree(lat), report.margin_float)


@dataclass(frozen=True)
class DriftRecord:
    index: int
    n: int
    covector: tuple[int, ...]
    integral_certificate: bool
    degree_constant: bool
    decreasing_from: int | None
    constant_step_from: int | None
    step: LogValue
    asymptotic_step: LogValue
    final_height: LogValue


def drift_instance(index: int, seed: int, ns: tuple[int, ...] = (2, 3), steps: int = 15, base: int = 2) -> DriftRecord:
    rng = instance_rng(seed, index)
    n = ns[index % len(ns)]
    x = random_nilpotent(rng, n)
    lat0 = random_lattice(rng, n)
    p = PointInP.from_adjoint_matrix(x)
    integral = instability_search(p, budget=50, seed=index)
    cert = adjoint_drift_certificate(p)
    report = drift_sequence(p, cert.lam, base, steps, lat0, g=cert.matrix())
    return DriftRecord(
        index,
        n,
        p.covector,
        integral is not None and verify_certificate(p, integral),
        report.degree_constant,
        report.decreasing_from,
        report.constant_step_from,
        report.steps[-1],
        report.asymptotic_step,
        report.heights[-1],
    )


def _run(fn, count: int, workers: int):
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(count), chunksize=max(1, count // (4 * workers))))


def theorem1_suite(count: int, seed: int = 0, ns=(2, 3), workers: int = 1) -> list[Theorem1Record]:
    return _run(partial(theorem1_instance, seed=seed, ns=tuple(ns)), count, workers)


def drift_suite(count: int, seed: int = 0, ns=(2, 3), steps: int = 15, base: int = 2, workers: int = 1) -> list[DriftRecord]:
    return _run(partial(drift_instance, seed=seed, ns=tuple(ns), steps=steps, base=base), count, workers)


def summarize_theorem1(records: list[Theorem1Record]) -> dict:
    return {
        "count": len(records),
        "failures": [r.index for r in records if not r.satisfied],
        "min_margin": min((r.margin for r in records), default=None),
    }


def summarize_drift(records: list[DriftRecord]) -> dict:
    ok = [
        r.degree_constant and r.decreasing_from is not None and r.constant_step_from is not None
        for r in records
    ]
    return {
        "count": len(records),
        "failures": [r.index for r, good in zip(records, ok) if not good],
        "integral_certificates": sum(r.integral_certificate for r in records),
        "steps": sorted({str(r.step) for r in records}),
        "step_floats": sorted({float(lv_to_float(r.step, 17)) for r in records}),
    }
