from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hecke.errors import ParseError
from hecke.root_datum import RootDatum, parse_group

GL2, GL3 = parse_group("GL2"), parse_group("GL3")
PGL2, SL2, PGL3, SL3 = parse_group("PGL2"), parse_group("SL2"), parse_group("PGL3"), parse_group("SL3")
ALL = [GL2, GL3, PGL2, PGL3, SL2, SL3, parse_group("GL4")]


def cartan_A(r):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]


@pytest.mark.parametrize("G", ALL, ids=lambda g: g.name)
def test_pairing_matrix_is_type_A(G):
    assert G.pairing_matrix == cartan_A(G.n - 1)
    for i in range(G.n - 1):
        assert G.pairing(G.simple_coroots[i], i) == 2


def test_cochar_ranks():
    assert (GL3.cochar_rank, SL3.cochar_rank, PGL3.cochar_rank) == (3, 2, 2)


def test_pairing_examples():
    assert GL2.pairing((0, 0), 0) == 0
    assert PGL2.pairing((-1, 0), 0) == -1
    assert GL3.pairing((-2, 0, 1), 0) == -2
    with pytest.raises((IndexError, ValueError)):
        GL2.pairing((0, 0), 1)


def test_is_antidominant():
    assert GL2.is_antidominant((-3, 1))
    assert not GL2.is_antidominant((1, 0))
    assert GL3.is_antidominant((0, 0, 0))


def test_dominance_examples():
    assert PGL2.dominance_leq((-3, 0), (-3, 0))
    assert PGL2.dominance_leq((-3, 0), (-1, 0))
    # (0,-1) - (-1,0) = +coroot, while the reverse difference has coefficient -1
    assert GL2.dominance_leq((-1, 0), (0, -1))
    assert not GL2.dominance_leq((0, -1), (-1, 0))
    assert SL2.dominance_leq((-2,), (0,))


def test_antidominant_representative_examples():
    assert GL2.antidominant_representative([0, 0]) == (0, 0)
    assert GL2.antidominant_representative([1, -1]) == (-1, 1)
    assert PGL2.antidominant_representative([-1, 1]) == (-2, 0)


def test_torus_reconstruction_sl():
    # SL cocharacters are coroot coordinates: (c) -> diag(p^c, p^-c)
    assert SL2.to_gl((-2,)) == (-2, 2)
    assert SL3.from_gl(SL3.to_gl((1, -2))) == (1, -2)


def test_parse_group():
    assert parse_group("pgl2") == PGL2
    with pytest.raises(ParseError):
        parse_group("Sp4")


vec3 = st.lists(st.integers(-5, 5), min_size=3, max_size=3).map(tuple)


@given(vec3, vec3)
def test_pairing_additive(mu, nu):
    for i in range(2):
        assert GL3.pairing(GL3.add(mu, nu), i) == GL3.pairing(mu, i) + GL3.pairing(nu, i)


@given(vec3)
def test_representative_is_antidominant(v):
    for G in (GL3, PGL3, SL3):
        if G.family == "SL" and sum(v) != 0:
            continue
        assert G.is_antidominant(G.antidominant_representative(v))


@given(st.lists(vec3, min_size=3, max_size=3))
def test_dominance_is_partial_order(vs):
    G = GL3
    a, b, c = (G.antidominant_representative(v) for v in vs)
    b = tuple(x + (sum(a) - sum(b)) * (i == 0) for i, x in enumerate(b))
    assert G.dominance_leq(a, a)
    if G.dominance_leq(a, b) and G.dominance_leq(b, a):
        assert a == b
    if G.dominance_leq(a, b) and G.dominance_leq(b, c):
        assert G.dominance_leq(a, c)


def test_levi_blocks():
    M = GL3.levi((2, 1))
    assert M.positive_roots() == [(0, 1)]
    assert M.to_json() == {"family": "GL", "n": 3, "blocks": [2, 1]}
