"""Cosets that index Hecke computations.

Group elements that come out of enumeration have entries in Z[1/p] and are
handled exactly as nested lists of ``Fraction``.  Cartan cells of such
matrices are computed by integer elimination; the ``PMatrix`` Smith form is
the independent second route (used for factorizations and cross-checks).

The canonical transversal of U(F)/U(O) is the set of upper unitriangular
matrices whose entries are principal parts ``sum_{i<0} c_i p^i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExceeded, CellMismatch, PrecisionError, StructuralError
from .padic import INF, PMatrix, PrecisionContext, PScalar, primitive_root, smith_normal_form, vp
from .root_datum import Cochar, RootDatum

Matrix = list[list[Fraction]]

DEFAULT_BUDGET = 10 ** 7


# ----- exact Z[1/p] matrices -------------------------------------------------------------


def principal_part(q, p: int) -> Fraction:
    """Representative in [0, 1) with p-power denominator of q in Q_p/Z_p."""
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if k == 0:
        return Fraction(0)
    mod = p ** k
    c = num * pow(den, -1, mod) % mod
    return Fraction(c, mod)


def val(q, p: int):
    q = Fraction(q)
    if q == 0:
        return INF
    return vp(q.numerator, p) - vp(q.denominator, p)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[sum(x * y for x, y in zip(r, c)) for c in cols] for r in A]


def diag_p(p: int, exps: Sequence[int]) -> Matrix:
    n = len(exps)
    return [[Fraction(p) ** exps[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def unipotent_matrix(n: int, entries: dict) -> Matrix:
    m = identity(n)
    for (i, j), x in entries.items():
        m[i][j] = Fraction(x)
    return m


def unipotent_inverse(u: Matrix) -> Matrix:
    n = len(u)
    w = identity(n)
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            w[i][j] = -(u[i][j] + sum(u[i][k] * w[k][j] for k in range(i + 1, j)))
    return w


def exact_inverse(A: Matrix) -> Matrix:
    n = len(A)
    M = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [x * inv for x in M[k]]
        for i in range(n):
            if i != k and M[i][k] != 0:
                f = M[i][k]
                M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return [r[n:] for r in M]


def canonical_unipotent(u: Sequence[Sequence], p: int) -> Matrix:
    """Canonical representative of u U(O) for an upper unitriangular u over Z_(p)[1/p]."""
    n = len(u)
    u = [[Fraction(x) for x in r] for r in u]
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            c = u[i][j] - principal_part(u[i][j], p)
            if c:
                for k in range(i + 1):
                    u[k][j] -= c * u[k][i]
    return u


def is_integral_matrix(A: Matrix, p: int) -> bool:
    return all(Fraction(x).denominator % p for r in A for x in r)


def elementary_divisors(A: Sequence[Sequence], p: int) -> list[int]:
    """Valuations of the elementary divisors of a nonsingular matrix over Q_p, ascending.

    Integer elimination: clear denominators, then pivot on an entry of least
    valuation and kill its column after scaling rows by p-adic units.
    """
    n = len(A)
    rows = [[Fraction(x) for x in r] for r in A]
    den = 1
    for r in rows:
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
    shift = 0
    d = den
    while d % p == 0:
        d //= p
        shift += 1
    M = [[int(x * den) for x in r] for r in rows]
    out = []
    for k in range(n):
        best, bv = None, None
        for i in range(k, n):
            for j in range(k, n):
                x = M[i][j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if bv is None or v < bv:
                        best, bv = (i, j), v
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            raise ZeroDivisionError("singular matrix has no Cartan cell")
        i, j = best
        M[k], M[i] = M[i], M[k]
        if j != k:
            for r in M:
                r[k], r[j] = r[j], r[k]
        pk = p ** bv
        w = M[k][k] // pk
        rowk = M[k]
        for i in range(k + 1, n):
            b = M[i][k]
            if b:
                c = b // pk
                M[i] = [w * x - c * y for x, y in zip(M[i], rowk)]
        out.append(bv - shift)
    return out


def block_cell_exponents(A: Sequence[Sequence], p: int, datum: RootDatum) -> list[int]:
    """GL exponents of the M(O)-double coset of a block-diagonal matrix, antidominant per block."""
    out = []
    for r in datum.block_ranges():
        sub = [[A[i][j] for j in r] for i in r]
        out.extend(elementary_divisors(sub, p))
    return out


# ----- Cartan cells and factorizations -------------------------------------------------------


def cartan_cell(datum: RootDatum, g, p: int | None = None) -> Cochar:
    """Antidominant cocharacter of the K-double coset (M(O)-double coset for a Levi datum) of g.

    ``g`` is a ``PMatrix`` (Smith form route) or an exact matrix (integer route, needs ``p``).
    """
    if isinstance(g, PMatrix):
        if datum.is_full:
            _, D, _ = smith_normal_form(g)
            vals = [D[i, i].val for i in range(g.rows)]
        else:
            vals = []
            for r in datum.block_ranges():
                sub = PMatrix(g.ctx, [[g[i, j] for j in r] for i in r])
                _, D, _ = smith_normal_form(sub)
                vals.extend(D[i, i].val for i in range(len(r)))
        return datum.antidominant_representative(vals)
    if p is None:
        raise ValueError("exact matrices need p")
    if datum.is_full:
        return datum.antidominant_representative(elementary_divisors(g, p))
    return datum.antidominant_representative(block_cell_exponents(g, p, datum))


def cartan_factorize(datum: RootDatum, g: PMatrix, lam: Sequence[int] | None = None):
    """Return (k1, k2) in K with g = k1 @ lam(p) @ k2 (up to a scalar for PGL)."""
    if not datum.is_full:
        raise ValueError("cartan_factorize works on the full group")
    U, D, V = smith_normal_form(g)
    exps = [D[i, i].val for i in range(g.rows)]
    cell = datum.antidominant_representative(exps)
    if lam is not None and tuple(datum.normalize(lam)) != cell:
        raise CellMismatch(f"element lies in cell {cell}, not {tuple(lam)}")
    ctx = g.ctx
    if datum.family == "SL":
        delta = U.det()
        n = g.rows
        fix = [[PScalar.from_rational(ctx, int(i == j)) for j in range(n)] for i in range(n)]
        fixinv = [r[:] for r in fix]
        fix[n - 1][n - 1] = delta
        fixinv[n - 1][n - 1] = delta.inverse()
        U = U @ PMatrix(ctx, fixinv)
        V = PMatrix(ctx, fix) @ V
    w = PMatrix.diag_p(ctx, datum.to_gl(cell))
    prod = U @ w @ V
    ok = prod.scalar_multiple_of(g) if datum.family == "PGL" else prod.agrees(g)
    if not ok:
        raise StructuralError("Cartan factorization failed its product check")
    return U, V


# ----- unipotent cosets ---------------------------------------------------------------------


@dataclass(frozen=True)
class UnipotentCoset:
    """Canonical representative of u U(O): principal parts at positive-root positions."""

    n: int
    p: int
    coords: tuple[tuple[tuple[int, int], Fraction], ...] = field(default=())

    @staticmethod
    def from_entries(n: int, p: int, entries: dict) -> "UnipotentCoset":
        items = tuple(sorted((pos, Fraction(x)) for pos, x in entries.items() if x))
        for pos, x in items:
            if principal_part(x, p) != x:
                raise ValueError(f"entry {x} at {pos} is not a principal part")
        return UnipotentCoset(n, p, items)

    @staticmethod
    def from_matrix(u: Sequence[Sequence], p: int) -> "UnipotentCoset":
        c = canonical_unipotent(u, p)
        n = len(c)
        return UnipotentCoset(
            n, p, tuple(((i, j), c[i][j]) for i in range(n) for j in range(i + 1, n) if c[i][j])
        )

    @property
    def root_coords(self) -> dict:
        return dict(self.coords)

    def depth(self, pos) -> int:
        x = self.root_coords.get(pos, 0)
        return 0 if x == 0 else -val(x, self.p)

    def digits(self, pos) -> list[int]:
        """Digits c_{-d}, ..., c_{-1} of the principal part at a position."""
        x = self.root_coords.get(pos, Fraction(0))
        d = self.depth(pos)
        c = int(x * self.p ** d)
        return [(c // self.p ** i) % self.p for i in range(d - 1, -1, -1)]

    def matrix(self) -> Matrix:
        return unipotent_matrix(self.n, self.root_coords)

    def same_coset(self, other: "UnipotentCoset") -> bool:
        """Direct membership test u1^-1 u2 in U(O)."""
        prod = mat_mul(unipotent_inverse(self.matrix()), other.matrix())
        return is_integral_matrix(prod, self.p)


def enumerate_unipotent_transversal(
    datum: RootDatum, depths: Sequence[int], p: int, budget: int = DEFAULT_BUDGET
) -> Iterator[UnipotentCoset]:
    """All canonical u with depth at most depths[k] at the k-th positive root, in digit-lex order."""
    roots = datum.positive_roots()
    if len(depths) != len(roots):
        raise ValueError(f"need {len(roots)} depths, got {len(depths)}")
    if any(d < 0 for d in depths):
        raise ValueError("depths must be non-negative")
    total = 1
    for d in depths:
        total *= p ** d
    if total > budget:
        raise BudgetExceeded(f"transversal of size {total} exceeds budget {budget}")
    ranges = [range(p ** d) for d in depths]
    for cs in itertools.product(*ranges):
        entries = {pos: Fraction(c, p ** d) for pos, c, d in zip(roots, cs, depths) if c}
        yield UnipotentCoset(datum.n, p, tuple(sorted(entries.items())))


class Counter:
    """Shared visit counter enforcing an enumeration budget."""

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.visited = 0

    def tick(self, k: int = 1) -> None:
        self.visited += k
        if self.visited > self.budget:
            raise BudgetExceeded(f"enumeration visited more than {self.budget} nodes")


def _entry_candidates(S: Fraction, A: int, B: int, p: int) -> list[Fraction]:
    """Principal parts x with val(x) >= A and val(x + S) >= B."""
    if A >= 0:
        return [Fraction(0)] if val(S, p) >= B else []
    if B > A:
        if B >= 0:
            x = principal_part(-S, p)
            return [x] if val(x, p) >= A else []
        step = Fraction(p) ** B
        out = []
        for c in range(p ** (-B)):
            x = principal_part(-S + c * step, p)
            if val(x, p) >= A:
                out.append(x)
        return out
    step = Fraction(p) ** A
    return [c * step for c in range(p ** (-A)) if val(c * step + S, p) >= B]


def unipotent_fiber(
    p: int,
    cell: RootDatum,
    lam_gl: Sequence[int],
    mu_gl: Sequence[int],
    positions: Sequence[tuple[int, int]],
    slack: int = 0,
    counter: Counter | None = None,
) -> Iterator[dict]:
    """Canonical u supported on ``positions`` with mu(p) u in the ``cell``-double coset of lam(p).

    ``cell`` is the datum whose integral points define the double coset (the
    whole group, or a Levi whose blocks contain the positions).  Pruning uses
    that every entry of an element of the double coset has valuation at least
    min(lam) and every entry of its inverse at least -max(lam), block by block;
    the final membership is checked exactly.  ``slack`` loosens both bounds.
    """
    n = cell.n
    blk = cell.block_of()
    lo = {}
    hi = {}
    for b, r in enumerate(cell.block_ranges()):
        vals = [lam_gl[i] for i in r]
        lo[b], hi[b] = min(vals), max(vals)
    order = sorted(positions, key=lambda ij: (ij[1] - ij[0], ij[0]))
    posset = set(order)
    target = list(lam_gl)
    counter = counter or Counter()
    u: dict = {}
    w: dict = {}
    pw = [Fraction(p) ** m for m in mu_gl]

    def rec(k: int):
        if k == len(order):
            g = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                g[i][i] = pw[i]
            for (i, j), x in u.items():
                g[i][j] = pw[i] * x
            if cell.is_full:
                vals = sorted(elementary_divisors(g, p))
            else:
                vals = block_cell_exponents(g, p, cell)
            if vals == target:
                yield {pos: x for pos, x in u.items() if x}
            return
        i, j = order[k]
        b = blk[i]
        A = lo[b] - mu_gl[i] - slack
        B = mu_gl[j] - hi[b] - slack
        S = Fraction(0)
        for m in range(i + 1, j):
            if (i, m) in posset and (m, j) in posset:
                S += u[(i, m)] * w[(m, j)]
        for x in _entry_candidates(S, A, B, p):
            counter.tick()
            u[(i, j)] = x
            w[(i, j)] = -(x + S)
            yield from rec(k + 1)
        u.pop((i, j), None)
        w.pop((i, j), None)

    yield from rec(0)


# ----- rank-one torus stabilizers --------------------------------------------------------------


def alpha_exponent(datum: RootDatum) -> int:
    """c with alpha(t(s)) = s^c for the unit coordinate s of the rank-one torus."""
    _check_rank1(datum)
    return 1 if datum.family == "PGL" else 2


def _check_rank1(datum: RootDatum) -> None:
    if datum.n != 2 or datum.family not in ("PGL", "SL"):
        raise ValueError(f"rank-one datum (PGL2 or SL2) required, got {datum.name}")


def torus_element(datum: RootDatum, s) -> Matrix:
    """Exact matrix of the torus point with unit coordinate s (PGL2: diag(s,1); SL2: diag(s,1/s))."""
    _check_rank1(datum)
    s = Fraction(s)
    if datum.family == "PGL":
        return [[s, Fraction(0)], [Fraction(0), Fraction(1)]]
    return [[s, Fraction(0)], [Fraction(0), 1 / s]]


def torus_pmatrix(datum: RootDatum, ctx: PrecisionContext, s: int) -> PMatrix:
    _check_rank1(datum)
    one = PScalar.from_rational(ctx, 1)
    zero = PScalar.zero(ctx)
    su = PScalar.unit_from_int(ctx, s)
    other = one if datum.family == "PGL" else su.inverse()
    return PMatrix(ctx, [[su, zero], [zero, other]])


@dataclass(frozen=True)
class StabilizerDescriptor:
    """T(O) intersected with the stabilizer of a coset, as a congruence on alpha(t).

    ``residues`` lists the allowed classes of alpha(t) mod p^modulus.
    """

    kind: str
    p: int
    modulus: int = 0
    residues: tuple[int, ...] = (0,)
    alpha_exp: int = 1
    witness_index: int = 1

    @property
    def pure(self) -> bool:
        return self.modulus == 0 or self.residues == (1,)

    def contains_alpha(self, alpha_value) -> bool:
        if self.kind == "full_K_pair" or self.modulus == 0:
            return True
        x = Fraction(alpha_value)
        mod = self.p ** self.modulus
        r = x.numerator * pow(x.denominator, -1, mod) % mod
        return r in self.residues

    def contains(self, s) -> bool:
        return self.contains_alpha(Fraction(s) ** self.alpha_exp)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "residues": list(self.residues),
            "index": subgroup_index(self),
        }


def _divisors(n: int) -> list[int]:
    return sorted(d for d in range(1, n + 1) if n % d == 0)


def _exact_in_K(A: Matrix, p: int) -> bool:
    return is_integral_matrix(A, p)


def torus_stabilizer(datum: RootDatum, mu: Sequence[int], u: UnipotentCoset) -> StabilizerDescriptor:
    """Exact description of T(O) intersected with the stabilizer of mu(p) u K (rank one).

    Nothing about the shape is assumed: the stabilizer contains 1 + p^M Z_p for
    the a-priori modulus M read off the valuations of g and g^-1, so it is
    a subgroup of the cyclic group (Z/p^M)^*, located by testing powers of a
    primitive root.  Its image under alpha is then turned into a congruence.
    """
    _check_rank1(datum)
    p = u.p
    g = mat_mul(diag_p(p, datum.to_gl(mu)), u.matrix())
    ginv = exact_inverse(g)
    minv = min(val(x, p) for r in g for x in r)
    minvi = min(val(x, p) for r in ginv for x in r)
    M = max(0, int(-minv - minvi))
    c = alpha_exponent(datum)

    def member(s: int) -> bool:
        return _exact_in_K(mat_mul(mat_mul(ginv, torus_element(datum, s)), g), p)

    if M == 0:
        return StabilizerDescriptor("torus_congruence", p, 0, (0,), c, 1)
    g0 = primitive_root(p)
    order = (p - 1) * p ** (M - 1)
    mod = p ** M
    d = next(d for d in _divisors(order) if member(pow(g0, d, mod)))
    # the kernel of alpha (the centre of SL2) must act trivially
    if c == 2 and not member(mod - 1):
        raise StructuralError("central element -1 fails to stabilize a coset")
    # alpha(H) = <g0^(c d)> inside (Z/p^M)^*; index D = gcd(c d, order)
    D = math.gcd(c * d, order)
    j = 0
    while D % p ** (j + 1) == 0:
        j += 1
    if j > 0:
        m = j + 1
    elif D > 1:
        m = 1
    else:
        m = 0
    if m == 0:
        return StabilizerDescriptor("torus_congruence", p, 0, (0,), c, d)
    modm = p ** m
    gen = pow(g0, D, modm)
    res = {1}
    x = gen
    while x != 1:
        res.add(x)
        x = x * gen % modm
    desc = StabilizerDescriptor("torus_congruence", p, m, tuple(sorted(res)), c, d)
    if subgroup_index(desc) != d:
        raise StructuralError(f"stabilizer index mismatch: {subgroup_index(desc)} vs {d}")
    return desc


def subgroup_index(desc: StabilizerDescriptor) -> int:
    """Index in T(O), computed from the image of alpha on units mod p^m."""
    if desc.kind == "full_K_pair" or desc.modulus == 0:
        return 1
    p, m, c = desc.p, desc.modulus, desc.alpha_exp
    mod = p ** m
    image = {pow(s, c, mod) for s in range(1, mod) if s % p}
    allowed = image & set(desc.residues)
    if len(image) % len(allowed):
        raise StructuralError("residue set is not a subgroup of the alpha image")
    return len(image) // len(allowed)


def torus_orbit_representatives(datum: RootDatum, p: int, depth: int) -> list[Fraction]:
    """Representatives x of T(O)-orbits on principal parts of exact depth ``depth``."""
    _check_rank1(datum)
    if depth == 0:
        return [Fraction(0)]
    c = alpha_exponent(datum)
    g0 = primitive_root(p)
    mod = p ** depth
    k = math.gcd(c, p - 1)
    return [Fraction(pow(g0, i, mod), mod) for i in range(k)]
