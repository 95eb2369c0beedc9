"""Brute-force oracles used to cross-check the fast paths.

Nothing here prunes: transversals are enumerated in full up to a depth that
is valuation-safe, and Cartan cells are read off the ``PMatrix`` Smith form
rather than the integer elimination used by the enumerators.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .cosets import (
    alpha_exponent,
    cartan_factorize,
    diag_p,
    enumerate_unipotent_transversal,
    exact_inverse,
    mat_mul,
    principal_part,
    torus_pmatrix,
)
from .padic import PMatrix, PrecisionContext
from .root_datum import Cochar, RootDatum


def _cell_snf(datum: RootDatum, ctx: PrecisionContext, g) -> Cochar:
    from .padic import smith_normal_form

    _, D, _ = smith_normal_form(PMatrix.from_rows(ctx, g))
    return datum.antidominant_representative([D[i, i].val for i in range(len(g))])


def _gl_box(datum: RootDatum, lam: Sequence[int], total: int) -> list[tuple[int, ...]]:
    """GL exponent vectors with entries in [min lam, max lam] summing to ``total``."""
    lg = datum.to_gl(lam)
    shift = (total - sum(lg)) // datum.n if datum.family == "PGL" else 0
    lo, hi = min(lg) + shift, max(lg) + shift
    return [e for e in itertools.product(range(lo, hi + 1), repeat=datum.n) if sum(e) == total]


def brute_satake0(datum: RootDatum, p: int, lam: Sequence[int], extra_depth: int = 0, precision: int = 30) -> dict:
    """S(T_lam)(mu) = #{u in U(F)/U(O) : mu(p) u in K lam K}, over Z, for the full group."""
    ctx = PrecisionContext(p, precision, 1)
    lam = datum.normalize(lam)
    lg = datum.to_gl(lam)
    depth = max(lg) - min(lg) + extra_depth
    depths = [depth] * len(datum.positive_roots())
    out: dict = {}
    mus = _gl_box(datum, lam, sum(lg))
    for u in enumerate_unipotent_transversal(datum, depths, p):
        um = u.matrix()
        for e in mus:
            g = mat_mul(diag_p(p, e), um)
            if _cell_snf(datum, ctx, g) == lam:
                mu = datum.from_gl(e)
                out[mu] = out.get(mu, 0) + 1
    return out


def brute_structure_constant(
    datum: RootDatum, p: int, lam: Sequence[int], mu: Sequence[int], nu: Sequence[int], precision: int = 30
) -> int:
    """#{z in K lam K / K : z^-1 nu(p) in K mu K}, by enumerating all of K lam K / K."""
    ctx = PrecisionContext(p, precision, 1)
    lam, mu, nu = datum.normalize(lam), datum.normalize(mu), datum.normalize(nu)
    lg = datum.to_gl(lam)
    depth = max(lg) - min(lg)
    depths = [depth] * len(datum.positive_roots())
    w = diag_p(p, datum.to_gl(nu))
    count = 0
    etas = _gl_box(datum, lam, sum(lg))
    for u in enumerate_unipotent_transversal(datum, depths, p):
        um = u.matrix()
        for e in etas:
            z = mat_mul(diag_p(p, e), um)
            if _cell_snf(datum, ctx, z) != lam:
                continue
            if _cell_snf(datum, ctx, mat_mul(exact_inverse(z), w)) == mu:
                count += 1
    return count


def cycle_transfer_satake1(F, mu: Sequence[int], s: int, depth: int, precision: int = 40) -> int:
    """Value at t(s) of the degree-one Satake transform at mu, via cycles of t(s).

    Runs over every coset mu(p) i_alpha(x) K with depth(x) <= ``depth``; on a
    cycle of length r through x of the cyclic group generated by t the
    contribution is F(K, xK)(g^-1 t^r g).  Stabilizer descriptors and orbit
    representatives are not used.
    """
    datum = F.datum
    p, a = F.p, F.a
    ctx = PrecisionContext(p, precision, a)
    mu = datum.normalize(mu)
    e = datum.to_gl(mu)
    c = alpha_exponent(datum)
    sc = Fraction(s) ** c
    mod = p ** depth
    xs = [Fraction(k, mod) for k in range(mod)]
    seen = set()
    total = 0
    for x in xs:
        x = principal_part(x, p)
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = principal_part(sc * x, p)
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = principal_part(sc * y, p)
        g = [[Fraction(p) ** e[0], Fraction(p) ** e[0] * x], [Fraction(0), Fraction(p) ** e[1]]]
        lam = _cell_snf(datum, ctx, g)
        coeff = F.support.get(lam)
        if not coeff:
            continue
        k1, _ = cartan_factorize(datum, PMatrix.from_rows(ctx, g), lam)
        t = torus_pmatrix(datum, ctx, pow(s, len(cyc), p ** precision))
        total += coeff * F.generator(lam)(k1.inverse() @ t @ k1)
    return total % p ** a
