import random

import pytest

from hecke.classical import (
    HeckeElem0,
    TorusElem0,
    check_support_cone,
    convolve0,
    levi_targets,
    random_element,
    satake0,
    satake_fiber_count,
    structure_constants,
    transitivity_check,
)
from hecke.errors import ParseError
from hecke.oracles import brute_satake0
from hecke.regression import CONSTANTS
from hecke.root_datum import parse_group
from hecke.session import RunConfig, Session

P = 5
PGL2, GL2, GL3, SL2 = (parse_group(g) for g in ("PGL2", "GL2", "GL3", "SL2"))


def T(G, lam, a=None, c=1):
    return HeckeElem0(G, P, a, {lam: c})


def test_unit_and_identity(session):
    F = HeckeElem0(GL2, P, None, {(-1, 0): 3, (-2, 1): 2})
    assert convolve0(HeckeElem0.one(GL2, P), F, session) == F
    assert satake0(HeckeElem0.one(GL3, P), session=session) == TorusElem0(GL3, P, None, {(0, 0, 0): 1})


def test_T1_squared_pgl2(session):
    out = convolve0(T(PGL2, (-1, 0)), T(PGL2, (-1, 0)), session)
    frozen = next(c["value"] for c in CONSTANTS if c["kind"] == "structure" and c["group"] == "PGL2"
                  and c["p"] == P and c["lam"] == [-1, 0] and c["mu"] == [-1, 0] and c["nu"] == [0, 0])
    assert frozen == P + 1
    assert out == HeckeElem0(PGL2, P, None, {(-2, 0): 1, (0, 0): frozen})


def test_commutativity_gl2(session):
    rng = random.Random(3)
    box = GL2.antidominant_box(2)
    for _ in range(8):
        lam, mu = rng.choice(box), rng.choice(box)
        assert structure_constants(GL2, P, lam, mu, session) == structure_constants(GL2, P, mu, lam, session)


def test_example_mod_p(session):
    S = lambda n: satake0(T(PGL2, (-n, 0), 1), session=session)
    tor = lambda d: TorusElem0(PGL2, P, 1, d)
    assert S(0) == tor({(0, 0): 1})
    assert S(1) == tor({(-1, 0): 1})
    assert S(2) == tor({(-2, 0): 1, (0, 0): -1})


def test_gl2_over_Z_regression(session):
    got = satake0(T(GL2, (-1, 0)), session=session)
    # brute-force count, expected to be a p-power
    assert dict(got.support) == brute_satake0(GL2, P, (-1, 0)) == {(-1, 0): 1, (0, -1): P}


@pytest.mark.parametrize("G,lam", [(PGL2, (-3, 0)), (SL2, (-1,)), (GL3, (-1, -1, 0)), (GL3, (-2, 0, 0))])
def test_fast_satake_matches_brute_force(G, lam, session):
    assert dict(satake0(T(G, lam), session=session).support) == brute_satake0(G, P, lam)


def test_depth_stability(session):
    for lam in GL3.antidominant_box(2):
        for nu in levi_targets(GL3, GL3.torus(), GL3.to_gl(lam)):
            a = satake_fiber_count(GL3, GL3.torus(), P, lam, nu, session, 0)
            b = satake_fiber_count(GL3, GL3.torus(), P, lam, nu, session, 1)
            assert a == b


def test_verify_depth_flag():
    s = Session(RunConfig(verify_depth=True))
    assert satake0(T(PGL2, (-3, 0)), session=s) == satake0(T(PGL2, (-3, 0)))


def test_support_cone_detector():
    assert check_support_cone(TorusElem0(GL2, P, 2, {}), 2) == []
    bad = TorusElem0(GL2, P, 2, {(3, 0): 1})
    assert check_support_cone(bad, 2)
    assert check_support_cone(satake0(T(PGL2, (-3, 0), 2)), 2) == []


def test_transitivity_examples(session):
    assert transitivity_check(HeckeElem0.one(GL3, P, 1), (2, 1), session)[0]
    assert transitivity_check(T(GL3, (-1, 0, 0), 1), (2, 1), session)[0]
    rng = random.Random(9)
    F = random_element(GL3, P, 1, GL3.antidominant_box(1), rng)
    assert transitivity_check(F, (2, 1), session)[0]


def test_unitriangularity(session):
    box = PGL2.antidominant_box(4)
    for lam in box:
        img = satake0(T(PGL2, lam), session=session)
        assert img.coeff(lam) == 1
        for mu, _ in img.items():
            assert PGL2.dominance_leq(lam, PGL2.antidominant_representative(mu))


def test_json_round_trip_and_errors():
    F = HeckeElem0(GL2, P, 2, {(-1, 0): 7, (-2, 1): 30})
    assert HeckeElem0.from_json(F.to_json(), GL2, P, 2) == F
    with pytest.raises(ParseError):
        HeckeElem0.from_json({"support": [{"cochar": [1, 0], "coeff": 1}]}, GL2, P, 2)
    with pytest.raises(ParseError):
        HeckeElem0.from_json({"nope": []}, GL2, P, 2)


def test_coefficients_reduce():
    assert HeckeElem0(GL2, P, 1, {(-1, 0): 5}).support == {}
    with pytest.raises(ValueError):
        HeckeElem0(GL2, P, 1, {(0, -1): 1})
