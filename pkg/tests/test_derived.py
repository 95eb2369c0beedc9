import random
from fractions import Fraction

import pytest

from hecke.classical import HeckeElem0, satake0
from hecke.cosets import alpha_exponent, diag_p, mat_mul, torus_pmatrix
from hecke.derived import (
    CanonicalGenerator,
    HeckeElem1,
    cell_with_height,
    convolve_mixed,
    derived_satake1,
    divisibility_report,
    evaluate_class,
    generic_transfer,
    kernel_mod_prime_power,
    satake_matrix,
    satake_via_orbits,
    test_units as sample_units,
    transfer_abelian,
)
from hecke.errors import ContextMismatch, PrecisionError, StructuralError
from hecke.oracles import cycle_transfer_satake1
from hecke.padic import PMatrix, PrecisionContext, kappa_int, primitive_root
from hecke.root_datum import parse_group
from hecke.session import RunConfig, Session
from hecke.torus_dha import TorusDHAElem

from conftest import pm, random_K

P = 5
PGL2, SL2 = parse_group("PGL2"), parse_group("SL2")


def f(G, h, a=1):
    return HeckeElem1.f(G, P, a, h)


def T(G, n, a=1):
    return HeckeElem0.basis(G, P, cell_with_height(G, n) if G.family == "SL" else (-n, 0), a)


def c(G, pairs, a=1):
    return TorusDHAElem(G, P, a, {(mu, (1,)): v for mu, v in pairs.items()})


def random_K_lam(rng, h, det_one=False):
    while True:
        m = [[Fraction(rng.randrange(-40, 40)) for _ in range(2)] for _ in range(2)]
        m[1][0] *= P ** h
        d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if d % P:
            if det_one:
                m[0] = [x / d for x in m[0]]
            return m


def test_support_invariant():
    with pytest.raises(ValueError):
        HeckeElem1(PGL2, P, 1, {(-1, 0): 1})
    with pytest.raises(ValueError):
        HeckeElem1(PGL2, P, 1, {(0, 0): 1})
    with pytest.raises(StructuralError):
        HeckeElem1(parse_group("GL2"), P, 1, {})


@pytest.mark.parametrize("G,h,a", [(PGL2, 2, 1), (PGL2, 3, 2), (PGL2, 2, 3), (SL2, 2, 1), (SL2, 4, 2)])
def test_generator_is_homomorphism_on_stabilizer(G, h, a, rng):
    gen = CanonicalGenerator(G, cell_with_height(G, h), P, a)
    ctx = PrecisionContext(P, 30, a)
    sl = G.family == "SL"
    for _ in range(40):
        x, y = pm(ctx, random_K_lam(rng, h, sl)), pm(ctx, random_K_lam(rng, h, sl))
        assert gen(x @ y) == (gen(x) + gen(y)) % P ** a
    upper = pm(ctx, [[1, rng.randrange(100)], [0, 1]])
    lower = pm(ctx, [[1, 0], [P ** h * rng.randrange(100), 1]])
    assert gen(upper) == 0 and gen(lower) == 0
    with pytest.raises(StructuralError):
        gen(pm(ctx, [[1, 0], [P ** (h - 1), 1]]))


def test_evaluate_class_base_pair():
    ctx = PrecisionContext(P, 30, 1)
    F = f(PGL2, 3)
    base = diag_p(P, [-3, 0])
    one = PMatrix.identity(ctx, 2)
    for s in (6, 2, 17):
        t = torus_pmatrix(PGL2, ctx, s)
        assert evaluate_class(F, one, pm(ctx, base), t, ctx) == kappa_int(s, P, 1)
    assert evaluate_class(F, one, pm(ctx, base), one, ctx) == 0
    assert evaluate_class(F, one, pm(ctx, diag_p(P, [-2, 0])), one, ctx) == 0


def test_transport_independence(rng):
    ctx = PrecisionContext(P, 40, 1)
    F = f(PGL2, 3) + f(PGL2, 4).scale(2)
    for _ in range(100):
        k0 = pm(ctx, random_K(rng, 2, P))
        y = k0 @ pm(ctx, diag_p(P, [-3, 0]))
        # h stabilizing (K, yK): conjugate of a K_lam element
        h = k0 @ pm(ctx, random_K_lam(rng, 3)) @ k0.inverse()
        v1 = evaluate_class(F, PMatrix.identity(ctx, 2), y, h, ctx)
        # a second factorization: same cosets, different representatives
        x2 = pm(ctx, random_K(rng, 2, P))
        y2 = y @ pm(ctx, random_K(rng, 2, P))
        v2 = evaluate_class(F, x2, y2, h, ctx)
        assert v1 == v2
        # transport by g: pair -> g pair, h -> g h g^-1
        g = pm(ctx, mat_mul(diag_p(P, [rng.randrange(-2, 3), 0]), random_K(rng, 2, P)))
        v3 = evaluate_class(F, g, g @ y, g @ h @ g.inverse(), ctx)
        assert v1 == v3


def test_transfer_abelian():
    kap = lambda s: kappa_int(s, P, 2)
    assert all(transfer_abelian(kap, 1)(s) == kap(s) for s in (2, 6, 11))
    for m in (1, 2, 4, 5, 20, 25):
        assert all(transfer_abelian(kap, m, modulus=P ** 4)(s) == m * kap(s) % P ** 2 for s in sample_units(P))
    member = lambda s: s % 25 == 1
    with pytest.raises(StructuralError):
        transfer_abelian(kap, 4, member, P ** 4)(2)


def test_generic_transfer_oracle():
    rng = random.Random(5)
    mod = P ** 3
    elems = [x for x in range(1, mod) if x % P]
    mul, inv = (lambda x, y: x * y % mod), (lambda x: pow(x, -1, mod))
    g0 = primitive_root(P)
    for m in (1, 2, 4, 5, 10, 25, 100):
        hgen = pow(g0, m, mod)
        H = {pow(hgen, k, mod) for k in range(100 // m)}
        fh = lambda h: kappa_int(h, P, 2)
        for _ in range(5):
            g = rng.choice(elems)
            val, index = generic_transfer(elems, mul, inv, H.__contains__, fh, g)
            assert index == m
            assert val == transfer_abelian(fh, m, H.__contains__, mod)(g)


def test_convolution_examples(session):
    assert convolve_mixed(T(PGL2, 0), f(PGL2, 3), session=session) == f(PGL2, 3)
    assert convolve_mixed(T(PGL2, 1), f(PGL2, 3), session=session) == f(PGL2, 4)
    assert convolve_mixed(T(PGL2, 2), f(PGL2, 3), session=session) == f(PGL2, 5) - f(PGL2, 3)
    assert T(PGL2, 2) * f(PGL2, 3) == f(PGL2, 3) * T(PGL2, 2)
    with pytest.raises(ContextMismatch):
        convolve_mixed(HeckeElem0.basis(SL2, P, (-1,), 1), f(PGL2, 3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_satake1_example(n, session):
    got = derived_satake1(f(PGL2, n), session=session)
    assert got == c(PGL2, {(-n, 0): 1, (-(n - 2), 0): -1})


@pytest.mark.parametrize("G,a", [(PGL2, 1), (PGL2, 2), (SL2, 1), (SL2, 2)])
def test_satake1_leading_term_and_cone(G, a, session):
    for h in range(2, 7):
        if G.family == "SL" and h % 2:
            continue
        lam = cell_with_height(G, h)
        F = HeckeElem1.basis(G, P, a, lam)
        wide = [(k, 0) for k in range(-9, 10)] if G.family == "PGL" else [(k,) for k in range(-5, 6)]
        got = derived_satake1(F, targets=wide, session=session)
        e = max(0, a - h + 1)
        assert got.coeff(lam, (1,)) == P ** e * alpha_exponent(G) % P ** a
        for mu in wide:
            if not G.dominance_leq(lam, mu):
                assert got.coeff(mu, (1,)) == 0


@pytest.mark.parametrize("G,a", [(PGL2, 1), (PGL2, 2), (SL2, 2)])
def test_satake1_matches_cycle_oracle(G, a, session):
    for h in (2, 3, 4):
        if G.family == "SL" and h % 2:
            continue
        F = f(G, h, a)
        res = derived_satake1(F, session=session)
        for (mu, _), coef in res.support.items():
            for s in sample_units(P):
                depth = 2 + h
                want = coef * kappa_int(s, P, a) % P ** a
                assert cycle_transfer_satake1(F, mu, s, depth) == want


def test_depth_and_precision_stability():
    for h in (2, 3, 4, 5):
        F = f(PGL2, h)
        r0 = derived_satake1(F, ctx=PrecisionContext(P, 24, 1))
        r1 = derived_satake1(F, ctx=PrecisionContext(P, 28, 1), slack=1)
        assert r0 == r1


def test_precision_starvation():
    with pytest.raises(PrecisionError):
        derived_satake1(f(PGL2, 5), ctx=PrecisionContext(P, 4, 1))


def test_divisibility(session):
    for h in (2, 3, 4):
        rep = divisibility_report(f(PGL2, h), 4, session=session)
        assert rep["violations"] == []
        assert all(r["coeff"] == 0 for r in rep["rows"])
    rep = divisibility_report(f(PGL2, 3, 2), 4, session=session)
    row = next(r for r in rep["rows"] if r["pairing"] == 1)
    assert row["coeff"] % P == 0 and row["coeff"] != 0
    assert row["zero_reason"] is None
    forged = c(PGL2, {(1, 0): 1}, 2)
    assert divisibility_report(f(PGL2, 3, 2), 4, result=forged)["violations"]


def test_zero_reasons():
    prov = []
    derived_satake1(f(PGL2, 3), targets=[(-7, 0), (1, 0)], provenance=prov)
    assert [p.zero_reason for p in prov] == ["support", "divisibility"]


def test_satake_matrix():
    m = satake_matrix(PGL2, P, 1, 5)
    assert m["kernel"] == []
    assert set(m["diagonal"].values()) == {1}
    m2 = satake_matrix(PGL2, P, 1, 2)
    assert len(m2["columns"]) == 1 and m2["kernel"] == []
    assert satake_matrix(SL2, P, 2, 6)["kernel"] == []


def test_kernel_mod_prime_power():
    assert kernel_mod_prime_power([[1, 1], [5, 5]], 5, 2) == [[24, 1]]
    gens = kernel_mod_prime_power([[5, 0]], 5, 2)
    assert sorted(gens) == [[0, 1], [5, 0]]
    assert kernel_mod_prime_power([[1, 0], [0, 1]], 5, 3) == []


@pytest.mark.parametrize("G", [PGL2, SL2])
def test_degree_zero_pipeline(G, session):
    for h in range(0, 6):
        if G.family == "SL" and h % 2:
            continue
        F = HeckeElem0(G, P, None, {cell_with_height(G, h) if G.family == "SL" else (-h, 0): 1})
        assert satake_via_orbits(F) == satake0(F, session=session)


def test_homomorphism_sl2(session):
    rng = random.Random(11)
    for _ in range(4):
        Tm = HeckeElem0(SL2, P, 1, {(-1,): rng.randrange(1, 5), (0,): rng.randrange(5)})
        F = f(SL2, rng.choice((2, 4)))
        lhs = derived_satake1(convolve_mixed(Tm, F, session=session), session=session)
        rhs = TorusDHAElem.from_torus0(satake0(Tm, session=session)) * derived_satake1(F, session=session)
        assert lhs == rhs


def test_json_round_trip():
    F = f(PGL2, 3, 2).scale(7) + f(PGL2, 2, 2)
    assert HeckeElem1.from_json(F.to_json(), PGL2, P, 2) == F


def test_a2_images_reduce_to_a1():
    # observed at a = 2: f_n -> c_n + (p-1) c_{n-2} - p c_{n-4}; mod p this is c_n - c_{n-2}
    G = parse_group("PGL2")
    for p in (5, 7):
        s2 = Session(RunConfig(group="PGL2", p=p, a=2))
        s1 = Session(RunConfig(group="PGL2", p=p, a=1))
        for n in range(3, 6):
            img = derived_satake1(HeckeElem1.f(G, p, 2, n), session=s2)
            want = {((-n, 0), (1,)): 1, ((2 - n, 0), (1,)): p - 1, ((4 - n, 0), (1,)): -p}
            assert img == TorusDHAElem(G, p, 2, want)
            low = derived_satake1(HeckeElem1.f(G, p, 1, n), session=s1)
            assert {k: v % p for k, v in img.support.items() if v % p} == low.support


def test_homomorphism_at_a2():
    from hecke.verify import suite_homomorphism

    rep = suite_homomorphism(Session(RunConfig(group="PGL2", p=5, a=2)), 5, 2, seed=1, pairs0=5, pairs1=6)
    assert rep.passed, [c["name"] for c in rep.checks if c["status"] != "pass"]
