import random

import pytest
from hypothesis import given, strategies as st

from hecke.classical import TorusElem0
from hecke.errors import ContextMismatch
from hecke.padic import PMatrix, PrecisionContext, PScalar, kappa_int
from hecke.root_datum import parse_group
from hecke.torus_dha import TorusCharGenerator, TorusDHAElem, evaluate_deg1, shuffle_sign

P = 5
T1, T2, T3 = (parse_group(f"GL{r}").torus() for r in (1, 2, 3))


def mono(T, mu, w=(), c=1, a=1):
    return TorusDHAElem.monomial(T, P, a, mu, w, c)


def test_products():
    assert mono(T2, (1, 0)) * mono(T2, (0, 2)) == mono(T2, (1, 2))
    assert (mono(T1, (1,), (1,)) * mono(T1, (2,), (1,))).is_zero()
    assert mono(T2, (0, 0), (1,)) * mono(T2, (0, 0), (2,)) == mono(T2, (0, 0), (1, 2))
    assert mono(T2, (0, 0), (2,)) * mono(T2, (0, 0), (1,)) == -mono(T2, (0, 0), (1, 2))
    assert shuffle_sign((2, 3), (1,)) == 1 and shuffle_sign((2,), (1, 3)) == -1


def test_ring_ops():
    x = mono(T2, (1, -1), (2,), 3) + mono(T2, (0, 0), (), 2)
    zero = TorusDHAElem(T2, P, 1)
    assert x + zero == x and (x - x).is_zero() and x.scale(P).is_zero()
    with pytest.raises(ContextMismatch):
        x + TorusDHAElem(T2, P, 2)
    with pytest.raises(ValueError):
        TorusDHAElem(T2, P, 1, {((0, 0), (2, 1)): 1})


def _unit_diag(ctx, *s):
    n = len(s)
    rows = [[PScalar.unit_from_int(ctx, s[i]) if i == j else PScalar.zero(ctx) for j in range(n)] for i in range(n)]
    return PMatrix(ctx, rows)


def test_evaluate_deg1():
    ctx = PrecisionContext(P, 20, 1)
    assert evaluate_deg1(T2, {1: 1, 2: 3}, PMatrix.identity(ctx, 2), 1) == 0
    assert TorusCharGenerator(T1, 1, P, 1)(_unit_diag(ctx, 1 + P)) != 0
    with pytest.raises(ValueError):
        evaluate_deg1(T1, {1: 1}, PMatrix.diag_p(ctx, [1]), 1)


@given(st.integers(1, 10 ** 6).filter(lambda x: x % P), st.integers(1, 10 ** 6).filter(lambda x: x % P))
def test_generator_is_homomorphism(u, v):
    ctx = PrecisionContext(P, 20, 2)
    g = TorusCharGenerator(T2, 2, P, 2)
    lhs = g(_unit_diag(ctx, 1, u * v))
    assert lhs == (g(_unit_diag(ctx, 1, u)) + g(_unit_diag(ctx, 1, v))) % P ** 2
    assert kappa_int(u, P, 2) == g(_unit_diag(ctx, 7, u))


def _rand(rng, T, a=1):
    r = T.cochar_rank
    out = TorusDHAElem(T, P, a)
    for _ in range(rng.randrange(1, 3)):
        mu = tuple(rng.randrange(-2, 3) for _ in range(r))
        w = tuple(sorted(rng.sample(range(1, r + 1), rng.randrange(0, r + 1))))
        out = out + mono(T, mu, w, rng.randrange(1, P), a)
    return out


@pytest.mark.parametrize("T", [T1, T2, T3], ids=["rank1", "rank2", "rank3"])
def test_axioms(T):
    rng = random.Random(T.cochar_rank)
    r = T.cochar_rank
    for _ in range(100):
        x, y, z = (_rand(rng, T) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        for dx in range(r + 1):
            for dy in range(r + 1):
                xh, yh = x.degree_part(dx), y.degree_part(dy)
                assert xh * yh == (yh * xh).scale((-1) ** (dx * dy))
                if dx + dy > r:
                    assert (xh * yh).is_zero()
        x0, y0 = x.degree_part(0), y.degree_part(0)
        c0 = TorusElem0(T, P, 1, {mu: c for (mu, _), c in x0.support.items()})
        d0 = TorusElem0(T, P, 1, {mu: c for (mu, _), c in y0.support.items()})
        assert TorusDHAElem.from_torus0(c0 * d0) == x0 * y0


def test_json_shape():
    j = mono(T3, (1, 0, -1), (1, 3), 2).to_json()
    assert j["rank"] == 3 and j["support"] == [{"cochar": [1, 0, -1], "wedge": [1, 3], "coeff": 2}]
