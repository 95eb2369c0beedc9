"""Truncated p-adic scalars and matrices over Q_p.

A nonzero ``PScalar`` is ``p^val * unit + O(p^prec)`` with ``unit`` a p-adic
unit known modulo ``p^(prec - val)``.  A zero is ``O(p^prec)``; an exact zero
has ``prec = inf``.  Relative precision never exceeds the context's ``N``.
Precision loss is tracked pessimistically by the usual ultrametric rules, and
any request for digits that are not known raises ``PrecisionError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContextMismatch, PrecisionError

INF = math.inf


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(q, p: int):
    q = Fraction(q)
    if q == 0:
        return INF
    return vp(q.numerator, p) - vp(q.denominator, p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrecisionContext:
    """Prime ``p``, working precision ``N`` and coefficient exponent ``a``."""

    p: int
    N: int = 20
    a: int = 1

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        if self.a < 1:
            raise ValueError("coefficient exponent a must be >= 1")
        if self.N < self.a + 2:
            raise PrecisionError(f"precision N={self.N} below a + 2 = {self.a + 2}")

    @property
    def modulus(self) -> int:
        return self.p ** self.a

    def require(self, depth_bound: int) -> None:
        """Enforce N >= a + depth_bound + 2 at operation entry."""
        need = self.a + depth_bound + 2
        if self.N < need:
            raise PrecisionError(
                f"working precision N={self.N} too small: need at least {need} "
                f"(a={self.a}, valuation bound {depth_bound})"
            )

    def scalar(self, x) -> "PScalar":
        return PScalar.from_rational(self, x)

    def with_precision(self, N: int) -> "PrecisionContext":
        return PrecisionContext(self.p, N, self.a)


class PScalar:
    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx: PrecisionContext, val, unit: int, prec):
        # use PScalar.make for normalizing construction
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.prec = prec

    # ----- construction ------------------------------------------------------------

    @staticmethod
    def make(ctx: PrecisionContext, val, unit: int, prec) -> "PScalar":
        """Normalize ``p^val * unit + O(p^prec)``; ``unit`` must be prime to p unless zero."""
        if val == INF or unit == 0:
            return PScalar(ctx, INF, 0, prec)
        prec = min(prec, val + ctx.N)
        if prec <= val:
            return PScalar(ctx, INF, 0, prec)
        return PScalar(ctx, val, unit % ctx.p ** (prec - val), prec)

    @staticmethod
    def zero(ctx: PrecisionContext, prec=INF) -> "PScalar":
        return PScalar(ctx, INF, 0, prec)

    @staticmethod
    def from_rational(ctx: PrecisionContext, x) -> "PScalar":
        if isinstance(x, PScalar):
            return x
        q = Fraction(x)
        if q == 0:
            return PScalar.zero(ctx)
        p = ctx.p
        num, den = q.numerator, q.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        mod = p ** ctx.N
        unit = num * pow(den, -1, mod) % mod
        return PScalar(ctx, v, unit, v + ctx.N)

    @staticmethod
    def unit_from_int(ctx: PrecisionContext, n: int, rel: int | None = None) -> "PScalar":
        """The unit n known modulo p^rel (default: exactly, to N digits)."""
        if n % ctx.p == 0:
            raise ValueError(f"{n} is not a p-adic unit")
        rel = ctx.N if rel is None else min(rel, ctx.N)
        return PScalar(ctx, 0, n % ctx.p ** rel, rel)

    # ----- predicates and accessors -------------------------------------------------

    def is_zero(self) -> bool:
        return self.val == INF

    def is_exact_zero(self) -> bool:
        return self.val == INF and self.prec == INF

    @property
    def rel(self) -> int:
        return 0 if self.val == INF else self.prec - self.val

    def valuation(self):
        return self.val

    def lift(self) -> Fraction:
        """The rational representative p^val * unit (0 for zero)."""
        if self.val == INF:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.ctx.p) ** self.val

    def residue(self, k: int) -> int:
        """The integral element modulo p^k; requires the digits to be known."""
        if self.val == INF:
            if self.prec < k:
                raise PrecisionError(f"zero known only mod p^{self.prec}, asked mod p^{k}")
            return 0
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        if self.prec < k:
            raise PrecisionError(f"element known only mod p^{self.prec}, asked mod p^{k}")
        if self.val >= k:
            return 0
        return self.unit * self.ctx.p ** self.val % self.ctx.p ** k

    def _check(self, other: "PScalar") -> None:
        if other.ctx.p != self.ctx.p:
            raise ContextMismatch("p-adic scalars with different primes")

    def _coerce(self, other) -> "PScalar":
        if isinstance(other, PScalar):
            self._check(other)
            return other
        return PScalar.from_rational(self.ctx, other)

    # ----- arithmetic ---------------------------------------------------------------

    def __add__(self, other) -> "PScalar":
        other = self._coerce(other)
        ctx = self.ctx
        prec = min(self.prec, other.prec)
        if self.val == INF:
            if other.val == INF:
                return PScalar(ctx, INF, 0, prec)
            return PScalar.make(ctx, other.val, other.unit, prec)
        if other.val == INF:
            return PScalar.make(ctx, self.val, self.unit, prec)
        p = ctx.p
        v = min(self.val, other.val)
        if prec <= v:
            return PScalar(ctx, INF, 0, prec)
        mod = p ** (prec - v)
        s = (self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)) % mod
        if s == 0:
            return PScalar(ctx, INF, 0, prec)
        w = 0
        while s % p == 0:
            s //= p
            w += 1
        return PScalar.make(ctx, v + w, s, prec)

    __radd__ = __add__

    def __neg__(self) -> "PScalar":
        if self.val == INF:
            return self
        return PScalar(self.ctx, self.val, (-self.unit) % self.ctx.p ** self.rel, self.prec)

    def __sub__(self, other) -> "PScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PScalar":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "PScalar":
        other = self._coerce(other)
        ctx = self.ctx
        if self.val == INF or other.val == INF:
            if self.val == INF and other.val == INF:
                return PScalar(ctx, INF, 0, self.prec + other.prec)
            z, nz = (self, other) if self.val == INF else (other, self)
            return PScalar(ctx, INF, 0, z.prec + nz.val)
        val = self.val + other.val
        rel = min(self.rel, other.rel)
        return PScalar(ctx, val, self.unit * other.unit % ctx.p ** rel, val + rel)

    __rmul__ = __mul__

    def inverse(self) -> "PScalar":
        if self.val == INF:
            if self.prec == INF:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionError(f"inverse of an element that is zero to precision p^{self.prec}")
        rel = self.rel
        return PScalar(self.ctx, -self.val, pow(self.unit, -1, self.ctx.p ** rel), -self.val + rel)

    def __truediv__(self, other) -> "PScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "PScalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "PScalar":
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return PScalar.from_rational(self.ctx, 1)
        if self.val == INF:
            return PScalar(self.ctx, INF, 0, self.prec if self.prec == INF else self.prec * e)
        rel = self.rel
        return PScalar(self.ctx, self.val * e, pow(self.unit, e, self.ctx.p ** rel), self.val * e + rel)

    # ----- comparison and display ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PScalar):
            try:
                other = PScalar.from_rational(self.ctx, other)
            except (TypeError, ValueError):
                return NotImplemented
            # compare to the precision of self
            return (self - other).is_zero()
        return (self.ctx.p, self.val, self.unit, self.prec) == (other.ctx.p, other.val, other.unit, other.prec)

    def __hash__(self):
        return hash((self.ctx.p, self.val, self.unit, self.prec))

    def equals_to(self, other, prec) -> bool:
        """Agreement modulo p^prec; raises if either side is not known that far."""
        other = self._coerce(other)
        d = self - other
        if d.prec < prec and not (d.val != INF and d.val < prec):
            raise PrecisionError(f"difference known only mod p^{d.prec}, asked mod p^{prec}")
        return d.val >= prec

    def __repr__(self):
        if self.val == INF:
            return f"O({self.ctx.p}^{self.prec})"
        return f"{self.ctx.p}^{self.val}*{self.unit} + O({self.ctx.p}^{self.prec})"

    def to_json(self) -> dict:
        if self.val == INF:
            return {"val": "inf", "unit": "0"}
        return {"val": self.val, "unit": str(self.unit)}


# ----- logarithm and the log character --------------------------------------------


def log1p_int(x: int, p: int, prec: int) -> int:
    """log(1 + x) mod p^prec for an integer x divisible by p."""
    if x % p:
        raise ValueError("log1p_int needs x in pZ")
    mod = p ** prec
    if x % mod == 0:
        return 0
    vx = vp(x, p)
    total = 0
    xk = 1
    k = 0
    while True:
        k += 1
        xk *= x
        vk = vp(k, p)
        if k * vx - vk >= prec:
            # later terms only get smaller once k*vx outgrows log_p k
            if k * vx - math.log(k, p) >= prec + 1:
                break
            continue
        kk = k // p ** vk
        term = (xk // p ** vk) * pow(kk, -1, mod)
        total += term if k % 2 else -term
    return total % mod


def padic_log(u: PScalar) -> PScalar:
    """log(u) for u in 1 + pZ_p, to the absolute precision of u - 1."""
    ctx = u.ctx
    x = u - 1
    if x.val != INF and x.val < 1:
        raise ValueError("padic_log needs an argument in 1 + pZ_p")
    if x.val == INF:
        return PScalar.zero(ctx, x.prec)
    prec = x.prec
    xi = x.unit * ctx.p ** x.val
    value = log1p_int(xi, ctx.p, prec)
    return PScalar.from_rational(ctx, value) + PScalar.zero(ctx, prec)


def kappa_int(u: int, p: int, a: int) -> int:
    """kappa(u) = log(u^(p-1)) / (p (p-1)) mod p^a for an integer unit u.

    Only u mod p^(a+1) matters.
    """
    if u % p == 0:
        raise ValueError(f"{u} is not a unit mod {p}")
    w = pow(u, p - 1, p ** (a + 1))
    lg = log1p_int(w - 1, p, a + 1)
    return (lg // p) * pow(p - 1, -1, p ** a) % p ** a


def kappa(u: PScalar, a: int | None = None) -> int:
    """The log character of a unit PScalar, in Z/p^a."""
    ctx = u.ctx
    a = ctx.a if a is None else a
    if u.val != 0:
        raise ValueError("kappa needs a p-adic unit")
    if u.rel < a + 1:
        raise PrecisionError(f"kappa mod p^{a} needs the unit mod p^{a + 1}; known mod p^{u.rel}")
    return kappa_int(u.unit, ctx.p, a)


def primitive_root(p: int) -> int:
    """Smallest g that generates (Z/p^k)^* for every k >= 1."""
    order = p - 1
    factors = [q for q in range(2, order + 1) if order % q == 0 and is_prime(q)]
    for g in range(2, p * p):
        if g % p == 0:
            continue
        if all(pow(g, order // q, p) != 1 for q in factors) and pow(g, order, p * p) != 1:
            return g
    raise AssertionError("no primitive root found")


# ----- matrices -----------------------------------------------------------------------


class PMatrix:
    """A matrix of PScalars sharing one PrecisionContext."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx: PrecisionContext, entries: Sequence[Sequence[PScalar]]):
        self.ctx = ctx
        self.entries = [list(r) for r in entries]
        if any(len(r) != len(self.entries[0]) for r in self.entries):
            raise ValueError("ragged matrix")

    @staticmethod
    def from_rows(ctx: PrecisionContext, rows: Iterable[Iterable]) -> "PMatrix":
        return PMatrix(ctx, [[PScalar.from_rational(ctx, x) for x in r] for r in rows])

    @staticmethod
    def identity(ctx: PrecisionContext, n: int) -> "PMatrix":
        return PMatrix.from_rows(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def diag_p(ctx: PrecisionContext, exps: Sequence[int]) -> "PMatrix":
        n = len(exps)
        return PMatrix.from_rows(
            ctx, [[Fraction(ctx.p) ** exps[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij) -> PScalar:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "PMatrix") -> "PMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if self.ctx.p != other.ctx.p:
            raise ContextMismatch("matrices over different primes")
        out = []
        ocols = list(zip(*other.entries))
        for r in self.entries:
            row = []
            for c in ocols:
                acc = r[0] * c[0]
                for x, y in zip(r[1:], c[1:]):
                    acc = acc + x * y
                row.append(acc)
            out.append(row)
        return PMatrix(self.ctx, out)

    def scale(self, s) -> "PMatrix":
        return PMatrix(self.ctx, [[x * s for x in r] for r in self.entries])

    def min_valuation(self):
        return min(x.val for r in self.entries for x in r)

    def min_precision(self):
        return min(x.prec for r in self.entries for x in r)

    def lift(self) -> list[list[Fraction]]:
        return [[x.lift() for x in r] for r in self.entries]

    def det(self) -> PScalar:
        n = self.rows
        if n != self.cols:
            raise ValueError("det of a non-square matrix")
        return _det([r[:] for r in self.entries], self.ctx)

    def inverse(self) -> "PMatrix":
        """Gauss-Jordan inverse with minimal-valuation pivoting."""
        n = self.rows
        ctx = self.ctx
        one = PScalar.from_rational(ctx, 1)
        zero = PScalar.zero(ctx)
        A = [r[:] + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.entries)]
        for k in range(n):
            piv = min(range(k, n), key=lambda i: A[i][k].val)
            if A[piv][k].is_zero():
                raise PrecisionError("matrix is singular to working precision")
            A[k], A[piv] = A[piv], A[k]
            inv = A[k][k].inverse()
            A[k] = [x * inv for x in A[k]]
            for i in range(n):
                if i != k and not A[i][k].is_exact_zero():
                    f = A[i][k]
                    A[i] = [x - f * y for x, y in zip(A[i], A[k])]
        return PMatrix(ctx, [r[n:] for r in A])

    def transpose(self) -> "PMatrix":
        return PMatrix(self.ctx, [list(c) for c in zip(*self.entries)])

    def equals_to(self, other: "PMatrix", prec) -> bool:
        return all(
            x.equals_to(y, prec) for rx, ry in zip(self.entries, other.entries) for x, y in zip(rx, ry)
        )

    def agrees(self, other: "PMatrix", prec=None) -> bool:
        """Entrywise agreement to the precision both sides actually carry (or to prec)."""
        for rx, ry in zip(self.entries, other.entries):
            for x, y in zip(rx, ry):
                d = x - y
                bound = d.prec if prec is None else min(prec, d.prec)
                if d.val != INF and d.val < bound:
                    return False
        return True

    def scalar_multiple_of(self, other: "PMatrix") -> bool:
        """PGL equality: self = s * other for some nonzero scalar s."""
        best = None
        for i, r in enumerate(other.entries):
            for j, x in enumerate(r):
                if not x.is_zero() and (best is None or x.val < other.entries[best[0]][best[1]].val):
                    best = (i, j)
        if best is None:
            raise PrecisionError("zero matrix to precision")
        s = self.entries[best[0]][best[1]] / other.entries[best[0]][best[1]]
        if s.is_zero():
            return False
        return self.agrees(other.scale(s))

    def __repr__(self):
        return "PMatrix(" + repr(self.entries) + ")"

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.entries]


def _det(A: list[list[PScalar]], ctx: PrecisionContext) -> PScalar:
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = PScalar.zero(ctx)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in A[1:]]
        term = A[0][j] * _det(minor, ctx)
        total = total + term if j % 2 == 0 else total - term
    return total


def is_in_K(g: PMatrix, family: str = "GL") -> bool:
    """Membership in G(Z_p); for PGL, membership of the scaling class."""
    if family == "PGL":
        m = g.min_valuation()
        if m == INF:
            return False
        g = g.scale(PScalar.from_rational(g.ctx, Fraction(g.ctx.p) ** (-m)))
    if g.min_valuation() < 0:
        return False
    d = g.det()
    if d.is_zero():
        if d.prec <= 0:
            raise PrecisionError("determinant unknown to precision")
        return False
    if family == "SL" and not d.equals_to(1, min(d.prec, g.ctx.N // 2)):
        return False
    return d.val == 0


def smith_normal_form(M: PMatrix) -> tuple[PMatrix, PMatrix, PMatrix]:
    """M = U @ D @ V with U, V in GLn(Z_p) and D = diag(p^d_1, ..., p^d_n), d weakly increasing."""
    n = M.rows
    if n != M.cols:
        raise ValueError("smith_normal_form needs a square matrix")
    ctx = M.ctx
    one = PScalar.from_rational(ctx, 1)
    zero = PScalar.zero(ctx)
    A = [r[:] for r in M.entries]
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    exps = []
    for k in range(n):
        best, bv = None, INF
        for i in range(k, n):
            for j in range(k, n):
                v = A[i][j].val
                if v < bv:
                    best, bv = (i, j), v
        if best is None:
            raise PrecisionError("matrix is singular to working precision")
        i, j = best
        if i != k:
            A[i], A[k] = A[k], A[i]
            for r in U:
                r[i], r[k] = r[k], r[i]
        if j != k:
            for r in A:
                r[j], r[k] = r[k], r[j]
            V[j], V[k] = V[k], V[j]
        piv = A[k][k]
        u = PScalar(ctx, 0, piv.unit, piv.rel)
        uinv = u.inverse()
        A[k] = [x * uinv for x in A[k]]
        for r in U:
            r[k] = r[k] * u
        pk = A[k][k]
        for i in range(k + 1, n):
            if A[i][k].is_zero():
                A[i][k] = zero
                continue
            f = A[i][k] / pk
            A[i] = [x - f * y if c > k else x for c, (x, y) in enumerate(zip(A[i], A[k]))]
            A[i][k] = zero
            for r in U:
                r[k] = r[k] + f * r[i]
        for j in range(k + 1, n):
            if A[k][j].is_zero():
                A[k][j] = zero
                continue
            # rows below k already vanish in column k, so only V changes
            f = A[k][j] / pk
            A[k][j] = zero
            V[k] = [x + f * y for x, y in zip(V[k], V[j])]
        exps.append(bv)
    return PMatrix(ctx, U), PMatrix.diag_p(ctx, exps), PMatrix(ctx, V)


def iwasawa_decompose(g: PMatrix, canonical: bool = False) -> tuple[PMatrix, PMatrix]:
    """g = b @ k with b upper triangular and k in GLn(Z_p).

    Column pivoting from the bottom row up.  With ``canonical=True`` the Borel
    factor is put in the form ``diag(p^d) @ u`` with ``u`` unipotent whose
    entries are principal parts, i.e. the canonical representative of bB(Z_p).
    """
    n = g.rows
    ctx = g.ctx
    one = PScalar.from_rational(ctx, 1)
    zero = PScalar.zero(ctx)
    A = [r[:] for r in g.entries]
    Kinv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(n - 1, -1, -1):
        j = min(range(i + 1), key=lambda c: A[i][c].val)
        if A[i][j].is_zero():
            raise PrecisionError("matrix is singular to working precision")
        if j != i:
            for r in A:
                r[j], r[i] = r[i], r[j]
            Kinv[j], Kinv[i] = Kinv[i], Kinv[j]
        piv = A[i][i]
        for l in range(i):
            if A[i][l].is_zero():
                A[i][l] = zero
                continue
            f = A[i][l] / piv
            for r in A:
                r[l] = r[l] - f * r[i]
            A[i][l] = zero
            Kinv[i] = [x + f * y for x, y in zip(Kinv[i], Kinv[l])]
    b = PMatrix(ctx, A)
    k = PMatrix(ctx, Kinv)
    if not canonical:
        return b, k
    exps = [A[i][i].val for i in range(n)]
    # u = p^-d b, then rescale columns to unit diagonal (absorbed into k)
    u = [[A[i][j].lift() / Fraction(ctx.p) ** exps[i] for j in range(n)] for i in range(n)]
    for j in range(n):
        d = u[j][j]
        for i in range(n):
            u[i][j] = u[i][j] / d
    from .cosets import canonical_unipotent

    uc = canonical_unipotent(u, ctx.p)
    bc = [[Fraction(ctx.p) ** exps[i] * uc[i][j] for j in range(n)] for i in range(n)]
    bm = PMatrix.from_rows(ctx, bc)
    kc = bm.inverse() @ g
    return bm, kc
