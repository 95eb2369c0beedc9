"""Degree-one derived Hecke algebra of PGL2 and SL2 and its derived Satake map.

Notation used below: for an antidominant cell lam put h = -<lam, alpha>.  The
stabilizer K_lam of (K, lam(p)K) is the set of integral matrices whose lower
left entry lies in p^h Z_p, and the p-part of its abelianization is cyclic of
order p^(h-1), detected by a/d mod p^h.  The canonical class on the cell is

    f_lam(k) = p^e * kappa(a / d)  in Z/p^a,   e = max(0, a - h + 1),

a homomorphism on K_lam of order p^(a-e).  For a = 1 and h >= 2 this is the
log character of a/d itself.

All degree-one classes are pushed to T(O) before corestricting, where the
transfer is the power map t -> t^index.  A homomorphism on T(O) is determined
by its values at a primitive root and at 1 + p, which is how results are
read back in the basis c_mu (kappa on the unit coordinate).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .classical import HeckeElem0, conv_targets, levi_targets, satake0
from .cosets import (
    UnipotentCoset,
    alpha_exponent,
    cartan_cell,
    cartan_factorize,
    diag_p,
    exact_inverse,
    mat_mul,
    subgroup_index,
    torus_orbit_representatives,
    torus_pmatrix,
    torus_stabilizer,
    val,
)
from .errors import ContextMismatch, ParseError, PrecisionError, StructuralError
from .padic import INF, PMatrix, PrecisionContext, PScalar, kappa_int, primitive_root
from .root_datum import Cochar, RootDatum
from .session import Session, default_session
from .torus_dha import TorusDHAElem


def _check_rank1(datum: RootDatum) -> None:
    if datum.n != 2 or datum.family not in ("PGL", "SL") or not datum.is_full:
        raise StructuralError(f"degree-one computations need PGL2 or SL2, got {datum.name}")


def cell_height(datum: RootDatum, lam: Sequence[int]) -> int:
    """h = -<lam, alpha>."""
    return -datum.pairing(lam, 0)


def generator_exponent(h: int, a: int) -> int:
    return max(0, a - h + 1)


# ----- canonical generators ---------------------------------------------------------------------


class CanonicalGenerator:
    """The class f_lam on K_lam: k -> p^e kappa(a/d) mod p^a."""

    def __init__(self, datum: RootDatum, lam: Sequence[int], p: int, a: int):
        _check_rank1(datum)
        self.datum = datum
        self.lam = datum.normalize(lam)
        self.h = cell_height(datum, self.lam)
        if self.h < 2:
            raise ValueError(f"cell {self.lam} carries no degree-one class (h = {self.h})")
        self.p = p
        self.a = a
        self.e = generator_exponent(self.h, a)

    @property
    def order(self) -> int:
        return self.p ** (self.a - self.e)

    def contains(self, k: PMatrix) -> bool:
        """Membership in K_lam (up to scalars for PGL)."""
        if self.datum.family == "PGL":
            m = k.min_valuation()
            k = k.scale(PScalar.from_rational(k.ctx, Fraction(k.ctx.p) ** (-m)))
        if k.min_valuation() < 0:
            return False
        c = k[1, 0]
        if c.val == INF and c.prec < self.h:
            raise PrecisionError("lower-left entry unknown to the needed precision")
        return c.val >= self.h and k.det().val == 0

    def __call__(self, k: PMatrix) -> int:
        if not self.contains(k):
            raise StructuralError(f"element is not in the stabilizer of cell {self.lam}")
        ratio = k[0, 0] / k[1, 1]
        if ratio.val != 0:
            raise StructuralError("diagonal ratio of a stabilizer element is not a unit")
        if ratio.rel < self.a + 1:
            raise PrecisionError("diagonal ratio known to too few digits")
        return self.p ** self.e * kappa_int(ratio.unit, self.p, self.a) % self.p ** self.a


# ----- degree-one Hecke elements ------------------------------------------------------------------


class HeckeElem1:
    """sum c_lam f_lam, with c_lam taken mod the order p^(a - e_lam) of f_lam."""

    __slots__ = ("datum", "p", "a", "support")

    def __init__(self, datum: RootDatum, p: int, a: int, support: Mapping | None = None):
        _check_rank1(datum)
        self.datum = datum
        self.p = p
        self.a = a
        out: dict = {}
        for lam, c in (support or {}).items():
            lam = datum.normalize(lam)
            if not datum.is_antidominant(lam):
                raise ValueError(f"{lam} is not antidominant")
            h = cell_height(datum, lam)
            if h < 2:
                raise ValueError(f"cell {lam} has h = {h}; degree-one classes need h >= 2")
            out[lam] = out.get(lam, 0) + int(c)
        self.support = {}
        for lam, c in out.items():
            c %= p ** (a - generator_exponent(cell_height(datum, lam), a))
            if c:
                self.support[lam] = c

    @classmethod
    def basis(cls, datum: RootDatum, p: int, a: int, lam: Sequence[int]) -> "HeckeElem1":
        return cls(datum, p, a, {tuple(lam): 1})

    @classmethod
    def f(cls, datum: RootDatum, p: int, a: int, h: int) -> "HeckeElem1":
        """Basis element on the cell with -<lam, alpha> = h."""
        return cls.basis(datum, p, a, cell_with_height(datum, h))

    def generator(self, lam) -> CanonicalGenerator:
        return CanonicalGenerator(self.datum, lam, self.p, self.a)

    def _like(self, support) -> "HeckeElem1":
        return HeckeElem1(self.datum, self.p, self.a, support)

    def _check(self, other: "HeckeElem1") -> None:
        if (self.datum, self.p, self.a) != (other.datum, other.p, other.a):
            raise ContextMismatch("degree-one elements over different data")

    def __add__(self, other: "HeckeElem1") -> "HeckeElem1":
        self._check(other)
        s = dict(self.support)
        for k, v in other.support.items():
            s[k] = s.get(k, 0) + v
        return self._like(s)

    def __neg__(self) -> "HeckeElem1":
        return self._like({k: -v for k, v in self.support.items()})

    def __sub__(self, other: "HeckeElem1") -> "HeckeElem1":
        return self + (-other)

    def scale(self, c: int) -> "HeckeElem1":
        return self._like({k: c * v for k, v in self.support.items()})

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, HeckeElem0):
            return convolve_mixed(other, self, "left")
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, HeckeElem0):
            return convolve_mixed(other, self, "right")
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElem1):
            return NotImplemented
        return (self.datum, self.p, self.a, self.support) == (other.datum, other.p, other.a, other.support)

    def __hash__(self):
        return hash((self.datum, self.p, self.a, tuple(sorted(self.support.items()))))

    def items(self):
        return sorted(self.support.items(), key=lambda kv: self.datum.sort_key(kv[0]))

    def to_json(self) -> dict:
        return {
            "group": self.datum.to_json(),
            "p": self.p,
            "a": self.a,
            "degree": 1,
            "support": [{"cochar": list(k), "coeff": v} for k, v in self.items()],
        }

    @classmethod
    def from_json(cls, obj, datum: RootDatum, p: int, a: int) -> "HeckeElem1":
        try:
            support: dict = {}
            for term in obj["support"]:
                lam = datum.normalize(term["cochar"])
                support[lam] = support.get(lam, 0) + int(term["coeff"])
            return cls(datum, p, a, support)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed degree-one element: {exc}") from exc

    def __repr__(self):
        terms = " + ".join(f"{v}*f{list(k)}" for k, v in self.items()) or "0"
        return f"<HeckeElem1 {self.datum.name} a={self.a} {terms}>"


def cell_with_height(datum: RootDatum, h: int) -> Cochar:
    """The antidominant cell with -<lam, alpha> = h."""
    _check_rank1(datum)
    if datum.family == "PGL":
        return (-h, 0)
    if h % 2:
        raise ValueError(f"SL2 cells have even height, got {h}")
    return (-(h // 2),)


# ----- exact rank-one coset representatives -----------------------------------------------------------


def rank1_matrix(datum: RootDatum, p: int, mu: Sequence[int], x) -> list[list[Fraction]]:
    """mu(p) i_alpha(x) as an exact matrix."""
    e = datum.to_gl(mu)
    return [
        [Fraction(p) ** e[0], Fraction(p) ** e[0] * Fraction(x)],
        [Fraction(0), Fraction(p) ** e[1]],
    ]


def _lifted_min(datum: RootDatum, lam: Sequence[int], total: int) -> int:
    g = list(datum.to_gl(lam))
    shift = total - sum(g)
    if shift % datum.n:
        return None
    return min(g) + shift // datum.n


def rank1_depth_bound(datum: RootDatum, mu: Sequence[int], cells: Iterable[Sequence[int]]) -> int:
    """Largest depth of x for which mu(p) i_alpha(x) can lie in one of the cells.

    Entries of an element of K lam K have valuation >= min(lam), and the
    (1,2) entry of mu(p) i_alpha(x) has valuation mu_1 - depth.
    """
    mu_gl = datum.to_gl(mu)
    best = 0
    for lam in cells:
        lo = _lifted_min(datum, lam, sum(mu_gl))
        if lo is not None:
            best = max(best, mu_gl[0] - lo)
    return best


def orbit_representatives(datum: RootDatum, p: int, mu: Sequence[int], cells, slack: int = 0):
    """(depth, x) for T(O)-orbits of cosets mu(p) i_alpha(x) K that can meet the cells."""
    kmax = rank1_depth_bound(datum, mu, cells) + slack
    for k in range(kmax + 1):
        for x in torus_orbit_representatives(datum, p, k):
            yield k, x


def _conj_bound(p: int, g) -> int:
    gi = exact_inverse(g)
    lo = min(val(x, p) for r in g for x in r)
    loi = min(val(x, p) for r in gi for x in r)
    return int(max(0, -lo) + max(0, -loi))


# ----- homomorphisms on T(O) and the transfer -----------------------------------------------------


TorusHom = Callable[[int], int]


def test_units(p: int) -> list[int]:
    """Units at which homomorphisms on Z_p^* are compared: 1 + p, a primitive root, and a mix."""
    g0 = primitive_root(p)
    return [1 + p, g0, g0 * (1 + p) ** 3 % p ** 6]


def transfer_abelian(f: TorusHom, index: int, member: Callable[[int], bool] | None = None, modulus=None) -> TorusHom:
    """Corestriction to the abelian ambient group: x -> f(x^index)."""

    def cores(s: int) -> int:
        y = pow(s, index, modulus) if modulus else s ** index
        if member is not None and not member(y):
            raise StructuralError(f"{s}^{index} does not lie in the subgroup")
        return f(y)

    return cores


def generic_transfer(elements: Sequence, mul, inv, member, f, g):
    """Permutation transfer: Ver(g) = prod r_{sigma(i)}^-1 g r_i over a left transversal; returns f(Ver(g)).

    ``elements`` enumerate the finite ambient group; ``member`` tests the subgroup.
    """
    reps: list = []
    for x in elements:
        if not any(member(mul(inv(r), x)) for r in reps):
            reps.append(x)
    total = None
    for r in reps:
        y = mul(g, r)
        s = next(q for q in reps if member(mul(inv(q), y)))
        hpart = mul(inv(s), y)
        total = hpart if total is None else mul(total, hpart)
    return f(total), len(reps)


# ----- the class of a degree-one element on a pair ---------------------------------------------------


def _pm(ctx: PrecisionContext, m) -> PMatrix:
    return PMatrix.from_rows(ctx, m)


def evaluate_class(F: HeckeElem1, x, y, h: PMatrix, ctx: PrecisionContext) -> int:
    """F(xK, yK) evaluated at h in the pair's stabilizer.

    x, y are exact matrices or PMatrices.  Finds g = x k1 with g (K, lam K) = (xK, yK)
    from a Cartan factorization of x^-1 y and returns c_lam f_lam(g^-1 h g).
    """
    datum = F.datum
    X = x if isinstance(x, PMatrix) else _pm(ctx, x)
    Y = y if isinstance(y, PMatrix) else _pm(ctx, y)
    Xi = X.inverse()
    g0 = Xi @ Y
    lam = cartan_cell(datum, g0)
    c = F.support.get(lam, 0)
    if c == 0:
        return 0
    k1, _ = cartan_factorize(datum, g0, lam)
    g = X @ k1
    inner = g.inverse() @ h @ g
    return c * F.generator(lam)(inner) % F.p ** F.a


def _torus_value(gen: CanonicalGenerator, frame: PMatrix, frame_inv: PMatrix, datum, ctx, s: int) -> int:
    t = torus_pmatrix(datum, ctx, s)
    return gen(frame_inv @ t @ frame)


@dataclass
class OrbitTerm:
    eta: tuple
    depth: int
    x: Fraction
    cell: tuple
    index: int
    modulus: int
    values: list

    def to_json(self) -> dict:
        return {
            "cochar": list(self.eta),
            "depth": self.depth,
            "x": str(self.x),
            "cell": list(self.cell),
            "stabilizer_index": self.index,
            "alpha_modulus": self.modulus,
            "transfer_factor": self.index,
        }


@dataclass
class Rank1Provenance:
    target: tuple
    orbits_visited: int = 0
    terms: list = field(default_factory=list)
    zero_reason: str | None = None

    def to_json(self) -> dict:
        return {
            "cochar": list(self.target),
            "orbits_visited": self.orbits_visited,
            "contributions": [t if isinstance(t, dict) else t.to_json() for t in self.terms],
            "zero_reason": self.zero_reason,
        }


def _restricted_value(
    ctx: PrecisionContext, datum, gen: CanonicalGenerator, frame_exact, units: Sequence[int], index: int
) -> list[int]:
    """Values at t(s) of the corestriction to T(O) of gen pulled back along the frame."""
    ctx.require(_conj_bound(ctx.p, frame_exact))
    frame = _pm(ctx, frame_exact)
    frame_inv = frame.inverse()
    mod = ctx.p ** ctx.N
    return [_torus_value(gen, frame, frame_inv, datum, ctx, pow(s, index, mod)) for s in units]


def _frame_from(datum, ctx, g_exact, lam):
    """k1 (as an exact lift) with g in k1 lam(p) K."""
    k1, _ = cartan_factorize(datum, _pm(ctx, g_exact), lam)
    return k1.lift()


def _coefficient(values: Sequence[int], units: Sequence[int], p: int, a: int, scale: int, order_exp: int):
    """Solve values[i] = coef * scale * kappa(units[i]) mod p^a with coef mod p^(a - order_exp).

    ``scale`` is p^e times the alpha exponent; returns None when not proportional.
    """
    mod = p ** a
    kap = [kappa_int(s, p, a) for s in units]
    # kappa(1 + p) is a unit, so the first unit pins the coefficient
    e = 0
    sc = scale
    while sc % p == 0:
        sc //= p
        e += 1
    v0 = values[0] % mod
    if v0 % p ** e:
        return None
    coef = (v0 // p ** e) * pow(sc * kap[0], -1, mod) % p ** (a - e)
    for v, k in zip(values, kap):
        if (coef * scale * k - v) % mod:
            return None
    return coef % p ** (a - order_exp)


# ----- derived Satake --------------------------------------------------------------------------------


def _mu_candidates(datum: RootDatum, cells: Iterable, prune: bool = True, spread: int = 0) -> list[Cochar]:
    out = set()
    torus = datum.torus()
    for lam in cells:
        for nu in levi_targets(datum, torus, datum.to_gl(lam), prune=prune, spread=spread):
            out.add(datum.from_gl(nu))
    return sorted(out, key=datum.sort_key)


def derived_satake1(
    F: HeckeElem1,
    mu: Sequence[int] | None = None,
    ctx: PrecisionContext | None = None,
    session: Session | None = None,
    provenance: list | None = None,
    targets: Iterable | None = None,
    slack: int = 0,
) -> TorusDHAElem:
    """Degree-one Satake transform, as a combination of the classes c_mu = (mu, {1}).

    c_mu is kappa of the unit coordinate, so on SL2 (where alpha(t) = s^2)
    the restriction of f_lam is 2 p^e c_lam.  With ``mu`` given only that
    coefficient is computed.
    """
    datum = F.datum
    session = session or default_session()
    ctx = ctx or PrecisionContext(F.p, session.config.precision, F.a)
    if ctx.p != F.p or ctx.a != F.a:
        raise ContextMismatch("precision context disagrees with the element")
    if mu is not None:
        mus = [datum.normalize(mu)]
    elif targets is not None:
        mus = [datum.normalize(m) for m in targets]
    else:
        mus = _mu_candidates(datum, F.support)
    out: dict = {}
    for m in mus:
        coef, prov = _satake1_at(F, m, ctx, session, slack)
        if provenance is not None:
            provenance.append(prov)
        if coef:
            out[(m, (1,))] = coef
    return TorusDHAElem(datum, F.p, F.a, out)


def _satake1_at(F: HeckeElem1, mu: Cochar, ctx: PrecisionContext, session: Session, slack: int = 0):
    datum = F.datum
    p, a = F.p, F.a
    key = ("sat1", datum.family, p, a, ctx.N, tuple(sorted(F.support.items())), mu, slack)
    hit = session.lookup(key)
    prov = Rank1Provenance(mu)
    if hit is not None:
        cached = hit[1]
        prov.zero_reason = cached["zero_reason"]
        prov.orbits_visited = cached["orbits_visited"]
        prov.terms = list(cached["contributions"])
        return int(hit[0]), prov
    units = test_units(p)
    totals = [0] * len(units)
    counter = session.counter()
    for depth, x in orbit_representatives(datum, p, mu, F.support, slack):
        counter.tick()
        prov.orbits_visited += 1
        g = rank1_matrix(datum, p, mu, x)
        lam = cartan_cell(datum, g, p)
        coeff = F.support.get(lam)
        if not coeff:
            continue
        u = UnipotentCoset.from_entries(2, p, {(0, 1): x} if x else {})
        desc = torus_stabilizer(datum, mu, u)
        index = subgroup_index(desc)
        gen = F.generator(lam)
        frame = _frame_from(datum, ctx, g, lam)
        vals = _restricted_value(ctx, datum, gen, frame, units, index)
        # corestriction after restriction is multiplication by the index
        for s in units:
            if kappa_int(pow(s, index, p ** (a + 2)), p, a) != index * kappa_int(s, p, a) % p ** a:
                raise StructuralError("transfer of kappa is not multiplication by the index")
            if not desc.contains(pow(s, index, p ** (desc.modulus + 1))):
                raise StructuralError("power map leaves the stabilizer")
        for i, v in enumerate(vals):
            totals[i] = (totals[i] + coeff * v) % p ** a
        prov.terms.append(OrbitTerm(mu, depth, x, lam, index, desc.modulus, vals))
    session.note_visited(counter)
    coef = _coefficient(totals, units, p, a, 1, 0)
    if coef is None:
        raise StructuralError(f"Satake value at {mu} is not a multiple of kappa: {totals}")
    if coef == 0:
        prov.zero_reason = "support" if not prov.terms else "divisibility"
    session.store(key, [coef, prov.to_json()])
    return coef, prov


def satake_via_orbits(F: HeckeElem0, session: Session | None = None) -> HeckeElem0:
    """Degree-zero run of the orbit pipeline: corestriction in degree 0 is the index."""
    datum = F.datum
    _check_rank1(datum)
    from .classical import TorusElem0

    out: dict = {}
    for m in _mu_candidates(datum, F.support):
        total = 0
        for depth, x in orbit_representatives(datum, F.p, m, F.support):
            g = rank1_matrix(datum, F.p, m, x)
            lam = cartan_cell(datum, g, F.p)
            coeff = F.support.get(lam)
            if coeff:
                u = UnipotentCoset.from_entries(2, F.p, {(0, 1): x} if x else {})
                total += coeff * subgroup_index(torus_stabilizer(datum, m, u))
        if total:
            out[m] = total
    return TorusElem0(datum, F.p, F.a, out)


# ----- mixed convolution --------------------------------------------------------------------------------


def _left_coset_orbits(datum: RootDatum, p: int, lam: Cochar):
    """T(O)-orbit representatives z = eta(p) i_alpha(x) of K lam K / K."""
    torus = datum.torus()
    lam_gl = datum.to_gl(lam)
    for eta_gl in levi_targets(datum, torus, lam_gl, prune=True):
        eta = datum.from_gl(eta_gl)
        for depth, x in orbit_representatives(datum, p, eta, [lam]):
            g = rank1_matrix(datum, p, eta, x)
            if cartan_cell(datum, g, p) == lam:
                yield eta, depth, x, g


def convolve_mixed(
    F0: HeckeElem0,
    F1: HeckeElem1,
    side: str = "left",
    ctx: PrecisionContext | None = None,
    session: Session | None = None,
) -> HeckeElem1:
    """F0 * F1 (side='left') or F1 * F0 (side='right') in the degree-one part."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    datum = F1.datum
    if F0.datum != datum or F0.p != F1.p:
        raise ContextMismatch("mixed convolution over different data")
    session = session or default_session()
    p, a = F1.p, F1.a
    ctx = ctx or PrecisionContext(p, session.config.precision, a)
    out: dict = {}
    for lam0, c0 in F0.support.items():
        for lam1, c1 in F1.support.items():
            for nu, coef in _mixed_constants(datum, p, a, lam0, lam1, side, ctx, session).items():
                out[nu] = out.get(nu, 0) + c0 * c1 * coef
    return HeckeElem1(datum, p, a, out)


def _mixed_constants(datum, p, a, lam0, lam1, side, ctx, session) -> dict:
    key = ("mixed", datum.family, p, a, ctx.N, tuple(lam0), tuple(lam1), side)
    hit = session.lookup(key)
    if hit is not None:
        return {tuple(k): int(v) for k, v in hit}
    units = test_units(p)
    mod = p ** a
    c = alpha_exponent(datum)
    gen1 = CanonicalGenerator(datum, lam1, p, a)
    results: dict = {}
    zl = lam0 if side == "left" else lam1
    other = lam1 if side == "left" else lam0
    cands = [datum.antidominant_representative(v) for v in conv_targets(datum.to_gl(lam0), datum.to_gl(lam1))]
    orbits = list(_left_coset_orbits(datum, p, zl))
    counter = session.counter()
    for nu in dict.fromkeys(cands):
        w = diag_p(p, datum.to_gl(nu))
        totals = [0] * len(units)
        for eta, depth, x, z in orbits:
            counter.tick()
            rest = mat_mul(exact_inverse(z), w)
            if cartan_cell(datum, rest, p) != other:
                continue
            u = UnipotentCoset.from_entries(2, p, {(0, 1): x} if x else {})
            index = subgroup_index(torus_stabilizer(datum, eta, u))
            if side == "left":
                k1 = _frame_from(datum, ctx, rest, lam1)
                frame = mat_mul(z, k1)
            else:
                frame = _frame_from(datum, ctx, z, lam1)
            vals = _restricted_value(ctx, datum, gen1, frame, units, index)
            totals = [(t + v) % mod for t, v in zip(totals, vals)]
        h = cell_height(datum, nu)
        if h < 2:
            if any(totals):
                raise StructuralError(f"nonzero degree-one value on cell {nu} with h = {h}")
            continue
        e = generator_exponent(h, a)
        coef = _coefficient(totals, units, p, a, p ** e * c, e)
        if coef is None:
            raise StructuralError(f"convolution value on {nu} is not a multiple of the canonical class")
        if coef:
            results[nu] = coef
    session.note_visited(counter)
    session.store(key, [[list(k), v] for k, v in sorted(results.items())])
    return results


# ----- structural reports ---------------------------------------------------------------------------------


def divisibility_report(
    F: HeckeElem1, box: int, ctx: PrecisionContext | None = None, session: Session | None = None,
    result: TorusDHAElem | None = None,
) -> dict:
    """Check that the Satake coefficient at mu is divisible by p^<mu, alpha> for 1 <= <mu, alpha> <= box."""
    datum = F.datum
    p, a = F.p, F.a
    mus = [m for m in _all_mu_with_pairing(datum, 1, box)]
    prov: list = []
    if result is None:
        result = derived_satake1(F, targets=mus, ctx=ctx, session=session, provenance=prov)
    reasons = {pr.target: pr.zero_reason for pr in prov}
    violations = []
    rows = []
    for m in mus:
        h = datum.pairing(m, 0)
        coef = result.coeff(m, (1,))
        need = p ** min(h, a)
        ok = coef % need == 0
        rows.append({"cochar": list(m), "pairing": h, "coeff": coef, "zero_reason": reasons.get(m)})
        if not ok:
            violations.append({"cochar": list(m), "pairing": h, "coeff": coef})
    return {"violations": violations, "rows": rows}


def _all_mu_with_pairing(datum: RootDatum, lo: int, hi: int) -> list[Cochar]:
    out = []
    if datum.family == "PGL":
        out = [(h, 0) for h in range(lo, hi + 1)]
    else:
        out = [(c,) for c in range(max(1, (lo + 1) // 2), hi // 2 + 1)]
    return out


def satake_matrix(datum: RootDatum, p: int, a: int, n_max: int, ctx=None, session=None) -> dict:
    """Matrix of the degree-one Satake map on f_2, ..., f_{n_max} and its kernel mod p^a."""
    _check_rank1(datum)
    heights = [h for h in range(2, n_max + 1) if datum.family == "PGL" or h % 2 == 0]
    cols = [cell_with_height(datum, h) for h in heights]
    images = [derived_satake1(HeckeElem1.basis(datum, p, a, lam), ctx=ctx, session=session) for lam in cols]
    rows = sorted({m for img in images for (m, _) in img.support}, key=datum.sort_key)
    mat = [[img.coeff(m, (1,)) for img in images] for m in rows]
    exps = [generator_exponent(cell_height(datum, lam), a) for lam in cols]
    kernel = kernel_mod_prime_power(mat, p, a) if rows else [[int(i == j) for i in range(len(cols))] for j in range(len(cols))]
    nontrivial = []
    for vec in kernel:
        reduced = [x % p ** (a - e) for x, e in zip(vec, exps)]
        if any(reduced):
            nontrivial.append(reduced)
    diagonal = {}
    for j, lam in enumerate(cols):
        diagonal[lam] = images[j].coeff(lam, (1,))
    return {
        "columns": cols,
        "rows": rows,
        "matrix": mat,
        "kernel": nontrivial,
        "diagonal": diagonal,
        "expected_diagonal": {lam: p ** e * alpha_exponent(datum) % p ** a for lam, e in zip(cols, exps)},
    }


def kernel_mod_prime_power(A: Sequence[Sequence[int]], p: int, a: int) -> list[list[int]]:
    """Generators of {x in (Z/p^a)^k : A x = 0}.

    Smith form over the local ring Z/p^a: pivot on an entry of least valuation,
    clear its row and column; column operations are accumulated in C so that
    the kernel is C applied to the kernel of the diagonal form.
    """
    mod = p ** a
    r = len(A)
    k = len(A[0]) if r else 0
    B = [[x % mod for x in row] for row in A]
    C = [[int(i == j) for j in range(k)] for i in range(k)]

    def v(x):
        if x % mod == 0:
            return a
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        return e

    diag = []
    t = 0
    while t < min(r, k):
        best = None
        for i in range(t, r):
            for j in range(t, k):
                if B[i][j] and (best is None or v(B[i][j]) < v(B[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        B[t], B[i] = B[i], B[t]
        for row in B:
            row[t], row[j] = row[j], row[t]
        for row in C:
            row[t], row[j] = row[j], row[t]
        e = v(B[t][t])
        unit = B[t][t] // p ** e
        uinv = pow(unit, -1, mod)
        for jj in range(t + 1, k):
            f = (B[t][jj] // p ** e) * uinv % mod
            if f:
                for row in B:
                    row[jj] = (row[jj] - f * row[t]) % mod
                for row in C:
                    row[jj] = (row[jj] - f * row[t]) % mod
        for ii in range(t + 1, r):
            f = (B[ii][t] // p ** e) * uinv % mod
            if f:
                B[ii] = [(x - f * y) % mod for x, y in zip(B[ii], B[t])]
        diag.append(e)
        t += 1
    gens = []
    for j in range(k):
        e = diag[j] if j < len(diag) else a
        y = [0] * k
        y[j] = p ** (a - e) % mod if e < a else 1
        if e == 0:
            continue
        x = [sum(C[i][l] * y[l] for l in range(k)) % mod for i in range(k)]
        gens.append(x)
    return gens


def random_degree0(datum: RootDatum, p: int, a: int, rng: random.Random, hmax: int = 2) -> HeckeElem0:
    cells = [lam for lam in datum.antidominant_box(hmax)]
    support = {}
    for lam in rng.sample(cells, min(2, len(cells))):
        support[lam] = rng.randrange(1, p ** a)
    return HeckeElem0(datum, p, a, support)
