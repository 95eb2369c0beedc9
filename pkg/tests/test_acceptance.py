"""Acceptance criteria, one test per criterion.

Each test records a ``CRITERION k: PASS|FAIL`` line; the lines are printed in
the pytest terminal summary, or directly when this file is run as a script.
"""

import time

import pytest

from hecke.session import RunConfig, Session
from hecke.verify import (
    suite_cone,
    suite_divisibility,
    suite_example15,
    suite_homomorphism,
    suite_injectivity,
    suite_oracles,
    suite_torus_dha,
    suite_transfer,
    suite_transitivity,
)

RESULTS: list[str] = []


def _session(p=5, a=1):
    return Session(RunConfig(group="PGL2", p=p, a=a))


def _record(k: int, title: str, reports, t0: float) -> None:
    n = sum(len(r.checks) for r in reports)
    failed = [c for r in reports for c in r.checks if c["status"] != "pass"]
    status = "PASS" if not failed else "FAIL"
    line = f"CRITERION {k}: {status}  {title}  ({n - len(failed)}/{n} checks, {time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line)
    assert not failed, [c["name"] for c in failed][:10]


def criterion_1():
    t0 = time.perf_counter()
    reps = [suite_example15(_session(p), p, 1) for p in (5, 7)]
    _record(1, "PGL2 worked example at p=5,7, a=1 (exact in Z/p)", reps, t0)
    assert time.perf_counter() - t0 < 300


def criterion_2():
    t0 = time.perf_counter()
    rep = suite_divisibility(_session(), 5, a_values=(1, 2), groups=("PGL2", "SL2"), box=4)
    _record(2, "degree-one divisibility, PGL2/SL2, p=5, a=1,2 (zero violations)", [rep], t0)


def criterion_3():
    t0 = time.perf_counter()
    rep = suite_cone(_session(5, 2), 5, a=2, groups=("GL2", "GL3"), height=3)
    _record(3, "thickened cone support, GL2/GL3, p=5, a=2, height<=3", [rep], t0)


def criterion_4():
    t0 = time.perf_counter()
    rep = suite_homomorphism(_session(), 5, 1, seed=0, groups0=("PGL2", "GL2"), pairs0=20, pairs1=10)
    _record(4, "homomorphism, 20 pairs each on PGL2/GL2 + 10 degree-one pairs", [rep], t0)


def criterion_5():
    t0 = time.perf_counter()
    rep = suite_transitivity(_session(), 5, 1, seed=0, height=2, combos=5)
    _record(5, "transitivity through Levi (2,1) of GL3, p=5", [rep], t0)
    assert time.perf_counter() - t0 < 900


def criterion_6():
    t0 = time.perf_counter()
    rep = suite_injectivity(_session(), 5, 1, "PGL2", n_max=5)
    _record(6, "degree-one Satake matrix n_max=5: trivial kernel, unit diagonal", [rep], t0)


def criterion_7():
    t0 = time.perf_counter()
    reps = [suite_transfer(_session(), 5, 1, seed=0, samples=50)] + [suite_oracles(_session(p), p) for p in (5, 7)]
    _record(7, "transfer on 50 quotients, brute-force constants, N+4 / depth+1 stability", reps, t0)


def criterion_8():
    t0 = time.perf_counter()
    rep = suite_torus_dha(_session(), 5, 1, seed=0, pairs=100)
    _record(8, "torus derived Hecke algebra axioms, ranks 1-3, 100 triples each", [rep], t0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(crit):
    crit()


if __name__ == "__main__":
    for crit in CRITERIA:
        try:
            crit()
        except AssertionError:
            pass
