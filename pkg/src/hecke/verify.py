"""Reproducible verification suites.

Every suite returns a report dict: suite name, the parameters used, a list of
checks with status and witness, provenance counters and wall time.  A failing
check always carries the element that failed.
"""

from __future__ import annotations

import math
import random
import time
from typing import Callable

from .classical import (
    HeckeElem0,
    check_support_cone,
    convolve0,
    random_element,
    satake0,
    structure_constants,
    transitivity_check,
)
from .cosets import (
    subgroup_index,
    torus_orbit_representatives,
    torus_stabilizer,
    UnipotentCoset,
)
from .derived import (
    HeckeElem1,
    convolve_mixed,
    derived_satake1,
    divisibility_report,
    generic_transfer,
    satake_matrix,
    test_units,
    transfer_abelian,
)
from .oracles import brute_satake0, brute_structure_constant
from .padic import PrecisionContext, kappa_int, primitive_root
from .root_datum import RootDatum, parse_group
from .session import Session
from .torus_dha import TorusDHAElem

SUITES = (
    "example15",
    "divisibility",
    "cone",
    "homomorphism",
    "transitivity",
    "injectivity",
    "transfer",
    "torus-dha",
    "oracles",
)


class Report:
    def __init__(self, suite: str, params: dict):
        self.suite = suite
        self.params = params
        self.checks: list[dict] = []
        self.start = time.perf_counter()

    def check(self, name: str, ok: bool, witness=None, **extra) -> bool:
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if not ok or witness is not None:
            entry["witness"] = _jsonable(witness)
        entry.update({k: _jsonable(v) for k, v in extra.items()})
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self, session: Session | None = None, timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(c["status"] == "fail" for c in self.checks),
            "checks": self.checks,
        }
        if session is not None:
            out["provenance"] = dict(session.stats)
        if timing:
            out["wall_time"] = round(time.perf_counter() - self.start, 3)
        return out


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _pgl(n: int) -> tuple:
    return (-n, 0)


# ----- suites ----------------------------------------------------------------------------------------


def suite_example15(session: Session, p: int, a: int = 1) -> Report:
    """Degree-zero and degree-one identities of the PGL2 example at the given p."""
    rep = Report("example15", {"group": "PGL2", "p": p, "a": a})
    G = parse_group("PGL2")
    for n in range(0, 6):
        got = satake0(HeckeElem0.basis(G, p, _pgl(n), a), session=session)
        want = {_pgl(n): 1}
        if n >= 2:
            want[_pgl(n - 2)] = -1
        exp = HeckeElem0(G.torus(), p, a, want)
        rep.check(f"satake0 T_{n}", got == exp, {"got": got, "expected": exp})
    for n in range(2, 6):
        got = derived_satake1(HeckeElem1.f(G, p, a, n), session=session)
        exp = TorusDHAElem(G, p, a, {(_pgl(n), (1,)): 1, (_pgl(n - 2), (1,)): -1})
        rep.check(f"derived_satake1 f_{n}", got == exp, {"got": got, "expected": exp})
    for n in range(0, 4):
        for m in range(2, 5):
            T = HeckeElem0.basis(G, p, _pgl(n), a)
            f = HeckeElem1.f(G, p, a, m)
            want = {_pgl(m + n): 1}
            if n >= 2:
                want[_pgl(m + n - 2)] = -1
            exp = HeckeElem1(G, p, a, want)
            for side in ("left", "right"):
                got = convolve_mixed(T, f, side, session=session)
                rep.check(f"T_{n} * f_{m} ({side})", got == exp, {"got": got, "expected": exp})
    return rep


def _basis_f(G: RootDatum, p: int, a: int, hmax: int) -> list[HeckeElem1]:
    return [HeckeElem1.f(G, p, a, h) for h in range(2, hmax + 1) if G.family == "PGL" or h % 2 == 0]


def suite_divisibility(session: Session, p: int, a_values=(1, 2), groups=("PGL2", "SL2"), box: int = 4) -> Report:
    rep = Report("divisibility", {"groups": list(groups), "p": p, "a": list(a_values), "box": box})
    for name in groups:
        G = parse_group(name)
        for a in a_values:
            for f in _basis_f(G, p, a, 4):
                r = divisibility_report(f, box, session=session)
                lam = next(iter(f.support))
                rep.check(
                    f"{name} a={a} f{list(lam)}",
                    not r["violations"],
                    r["violations"] or None,
                    rows=r["rows"],
                )
    return rep


def suite_cone(session: Session, p: int, a: int = 2, groups=("GL2", "GL3"), height: int = 3) -> Report:
    rep = Report("cone", {"groups": list(groups), "p": p, "a": a, "height": height})
    for name in groups:
        G = parse_group(name)
        for lam in G.antidominant_box(height):
            img = satake0(HeckeElem0.basis(G, p, lam, a), session=session)
            bad = check_support_cone(img, a)
            rep.check(f"{name} T{list(lam)}", not bad, bad or None)
    return rep


def suite_homomorphism(
    session: Session, p: int, a: int = 1, seed: int = 0, groups0=("PGL2", "GL2"), pairs0: int = 20, pairs1: int = 10
) -> Report:
    rep = Report("homomorphism", {"p": p, "a": a, "seed": seed, "pairs0": pairs0, "pairs1": pairs1})
    rng = random.Random(seed)
    for name in groups0:
        G = parse_group(name)
        box = G.antidominant_box(2)
        for i in range(pairs0):
            F1 = random_element(G, p, a, box, rng)
            F2 = random_element(G, p, a, box, rng)
            lhs = satake0(convolve0(F1, F2, session), session=session)
            rhs = satake0(F1, session=session) * satake0(F2, session=session)
            rep.check(f"{name} degree0 #{i}", lhs == rhs, {"F1": F1, "F2": F2, "lhs": lhs, "rhs": rhs})
    G = parse_group("PGL2")
    box = G.antidominant_box(2)
    for i in range(pairs1):
        T = random_element(G, p, a, box, rng)
        f = HeckeElem1.f(G, p, a, rng.randrange(2, 5))
        for side in ("left", "right"):
            conv = convolve_mixed(T, f, side, session=session)
            lhs = derived_satake1(conv, session=session)
            rhs = TorusDHAElem.from_torus0(satake0(T, session=session), a) * derived_satake1(f, session=session)
            rep.check(f"PGL2 degree1 #{i} {side}", lhs == rhs, {"T": T, "f": f, "lhs": lhs, "rhs": rhs})
    return rep


def suite_transitivity(session: Session, p: int, a: int = 1, seed: int = 0, height: int = 2, combos: int = 5) -> Report:
    rep = Report("transitivity", {"group": "GL3", "levi": [2, 1], "p": p, "a": a, "height": height})
    G = parse_group("GL3")
    box = G.antidominant_box(height)
    elems = [HeckeElem0.basis(G, p, lam, a) for lam in box]
    rng = random.Random(seed)
    elems += [random_element(G, p, a, box, rng, terms=3) for _ in range(combos)]
    for F in elems:
        ok, direct, via = transitivity_check(F, (2, 1), session)
        rep.check(f"{F!r}", ok, {"F": F, "direct": direct, "via": via})
    return rep


def suite_injectivity(session: Session, p: int, a: int = 1, group: str = "PGL2", n_max: int = 5) -> Report:
    rep = Report("injectivity", {"group": group, "p": p, "a": a, "n_max": n_max})
    G = parse_group(group)
    m = satake_matrix(G, p, a, n_max, session=session)
    rep.check("kernel trivial", not m["kernel"], m["kernel"] or None)
    for lam, d in m["diagonal"].items():
        want = m["expected_diagonal"][lam]
        rep.check(f"diagonal {list(lam)}", d == want, {"got": d, "expected": want})
    # leading term: rows of lower height vanish below the diagonal in dominance order
    rows, cols = m["rows"], m["columns"]
    for j, lam in enumerate(cols):
        for i, mu in enumerate(rows):
            if m["matrix"][i][j] and not G.dominance_leq(lam, mu):
                rep.check(f"cone column {list(lam)}", False, {"row": mu, "value": m["matrix"][i][j]})
    rep.check("matrix", True, {"rows": rows, "columns": cols, "matrix": m["matrix"]})
    return rep


def _finite_unit_group(p: int, M: int):
    mod = p ** M
    return [x for x in range(1, mod) if x % p], (lambda x, y: x * y % mod), (lambda x: pow(x, -1, mod))


def suite_transfer(session: Session, p: int, a: int = 1, seed: int = 0, samples: int = 50) -> Report:
    """Abelian transfer against the permutation transfer, and cores o res on stabilizers."""
    rep = Report("transfer", {"p": p, "a": a, "seed": seed, "samples": samples})
    rng = random.Random(seed)
    g0 = primitive_root(p)
    for i in range(samples):
        M = rng.randrange(a + 1, a + 3)
        mod = p ** M
        order = (p - 1) * p ** (M - 1)
        divs = [d for d in range(1, order + 1) if order % d == 0]
        m = rng.choice(divs)
        hgen = pow(g0, m, mod)
        hsize = order // m
        Hset = set()
        x = 1
        for _ in range(hsize):
            Hset.add(x)
            x = x * hgen % mod
        # a random homomorphism H -> Z/p^a: f(hgen^k) = k v with hsize v = 0
        step = p ** a // math.gcd(p ** a, hsize)
        v = step * rng.randrange(0, p ** a)
        dlog = {}
        x = 1
        for k in range(hsize):
            dlog[x] = k
            x = x * hgen % mod
        f = lambda h, v=v, dlog=dlog: dlog[h] * v % p ** a
        elems, mul, inv = _finite_unit_group(p, M)
        g = rng.choice(elems)
        generic, index = generic_transfer(elems, mul, inv, Hset.__contains__, f, g)
        abelian = transfer_abelian(f, m, Hset.__contains__, mod)(g)
        rep.check(
            f"quotient mod p^{M}, index {m}",
            generic == abelian and index == m,
            {"g": g, "generic": generic, "abelian": abelian, "index": index},
        )
    # cores o res = multiplication by the index, on stabilizers met in rank-one runs
    seen = 0
    for name in ("PGL2", "SL2"):
        G = parse_group(name)
        for mu in [(-3, 0), (-1, 0), (0, 0), (2, 0)] if name == "PGL2" else [(-2,), (0,), (1,)]:
            for depth in range(0, 4):
                for x in torus_orbit_representatives(G, p, depth):
                    if seen >= samples:
                        break
                    u = UnipotentCoset.from_entries(2, p, {(0, 1): x} if x else {})
                    desc = torus_stabilizer(G, mu, u)
                    idx = subgroup_index(desc)
                    kap = lambda s: kappa_int(s, p, a)
                    cores = transfer_abelian(kap, idx, desc.contains, p ** (a + desc.modulus + 2))
                    ok = all(cores(s) == idx * kap(s) % p ** a for s in test_units(p))
                    rep.check(f"{name} stabilizer of {list(mu)} x={x}", ok, {"descriptor": desc.to_json()})
                    seen += 1
    return rep


def _random_monomial(rng: random.Random, datum: RootDatum, p: int, a: int) -> TorusDHAElem:
    r = datum.cochar_rank
    mu = tuple(rng.randrange(-3, 4) for _ in range(r))
    wedge = tuple(sorted(rng.sample(range(1, r + 1), rng.randrange(0, r + 1))))
    return TorusDHAElem.monomial(datum, p, a, mu, wedge, rng.randrange(1, p ** a))


def suite_torus_dha(session: Session, p: int, a: int = 1, seed: int = 0, pairs: int = 100) -> Report:
    rep = Report("torus-dha", {"p": p, "a": a, "seed": seed, "pairs": pairs})
    rng = random.Random(seed)
    for r in (1, 2, 3):
        T = parse_group(f"GL{r}").torus()
        fails = {"assoc": None, "comm": None, "top": None, "deg0": None}
        for _ in range(pairs):
            x, y, z = (_random_monomial(rng, T, p, a) for _ in range(3))
            if (x * y) * z != x * (y * z) and fails["assoc"] is None:
                fails["assoc"] = {"x": x, "y": y, "z": z}
            dx, dy = len(next(iter(x.support))[1]), len(next(iter(y.support))[1])
            if x * y != (y * x).scale((-1) ** (dx * dy)) and fails["comm"] is None:
                fails["comm"] = {"x": x, "y": y}
            top = TorusDHAElem.monomial(T, p, a, (0,) * r, tuple(range(1, r + 1)))
            gen = TorusDHAElem.monomial(T, p, a, (0,) * r, (rng.randrange(1, r + 1),))
            if not (top * gen).is_zero() and fails["top"] is None:
                fails["top"] = {"top": top, "gen": gen}
            x0, y0 = x.degree_part(0), y.degree_part(0)
            c0 = HeckeElem0(T, p, a, {mu: c for (mu, _), c in x0.support.items()})
            d0 = HeckeElem0(T, p, a, {mu: c for (mu, _), c in y0.support.items()})
            if TorusDHAElem.from_torus0(c0 * d0) != x0 * y0 and fails["deg0"] is None:
                fails["deg0"] = {"x": x0, "y": y0}
        for k, w in fails.items():
            rep.check(f"rank {r} {k}", w is None, w)
    return rep


def suite_oracles(session: Session, p: int, seed: int = 0, extra_precision: int = 4) -> Report:
    """Brute-force recomputation of stored constants and stability under N+4, depth+1."""
    from .regression import CONSTANTS

    rep = Report("oracles", {"p": p})
    for entry in CONSTANTS:
        if entry["p"] != p:
            continue
        G = parse_group(entry["group"])
        kind = entry["kind"]
        if kind == "structure":
            lam, mu, nu = (tuple(entry[k]) for k in ("lam", "mu", "nu"))
            fast = structure_constants(G, p, lam, mu, session).get(nu, 0)
            brute = brute_structure_constant(G, p, lam, mu, nu)
            rep.check(f"{entry['group']} T{list(lam)}*T{list(mu)} at {list(nu)}",
                      fast == brute == entry["value"], {"fast": fast, "brute": brute, "stored": entry["value"]})
        elif kind == "satake0":
            lam = tuple(entry["lam"])
            fast = satake0(HeckeElem0.basis(G, p, lam), session=session)
            brute = brute_satake0(G, p, lam)
            stored = {tuple(k): v for k, v in entry["value"]}
            ok = dict(fast.support) == brute == stored
            rep.check(f"{entry['group']} satake0 T{list(lam)}", ok, {"fast": fast, "brute": brute})
    # stability of exported numbers under more precision and more depth
    G = parse_group("PGL2")
    base = Session(session.config)
    more = Session(session.config.with_(precision=session.config.precision + extra_precision))
    for n in range(2, 6):
        f = HeckeElem1.f(G, p, 1, n)
        r0 = derived_satake1(f, session=base)
        r1 = derived_satake1(f, session=more, ctx=PrecisionContext(p, more.config.precision, 1), slack=1)
        rep.check(f"satake1 f_{n} stable under N+{extra_precision}, depth+1", r0 == r1, {"base": r0, "more": r1})
    for n in range(0, 6):
        T = HeckeElem0.basis(G, p, _pgl(n))
        r0 = satake0(T, session=base)
        r1 = satake0(T, session=more, slack=1)
        rep.check(f"satake0 T_{n} stable under depth+1", r0 == r1, {"base": r0, "more": r1})
    for n in range(0, 4):
        for m in range(2, 5):
            T = HeckeElem0.basis(G, p, _pgl(n), 1)
            f = HeckeElem1.f(G, p, 1, m)
            r0 = convolve_mixed(T, f, session=base)
            r1 = convolve_mixed(T, f, session=more, ctx=PrecisionContext(p, more.config.precision, 1))
            rep.check(f"T_{n} * f_{m} stable under N+{extra_precision}", r0 == r1, {"base": r0, "more": r1})
    return rep


def run_suite(name: str, session: Session) -> Report:
    cfg = session.config
    p, a, seed = cfg.p, cfg.a, cfg.seed
    table: dict[str, Callable[[], Report]] = {
        "example15": lambda: suite_example15(session, p, 1),
        "divisibility": lambda: suite_divisibility(session, p),
        "cone": lambda: suite_cone(session, p, max(a, 2)),
        "homomorphism": lambda: suite_homomorphism(session, p, a, seed),
        "transitivity": lambda: suite_transitivity(session, p, a, seed),
        "injectivity": lambda: suite_injectivity(session, p, a, cfg.group if cfg.group in ("PGL2", "SL2") else "PGL2"),
        "transfer": lambda: suite_transfer(session, p, a, seed),
        "torus-dha": lambda: suite_torus_dha(session, p, a, seed),
        "oracles": lambda: suite_oracles(session, p, seed),
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}")
    return table[name]()
