"""The graded derived Hecke algebra of the split torus: S[X_*(T)] tensor an exterior algebra.

A monomial is ``(mu, A)`` with ``A`` a strictly increasing tuple of generator
indices (1-based).  ``(lam, A) * (mu, B)`` is ``sign * (lam + mu, A u B)``
where the sign is the parity of the shuffle that sorts A followed by B, and
the product is 0 when A and B meet.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import ContextMismatch, PrecisionError
from .padic import INF, PMatrix, kappa_int
from .root_datum import Cochar, RootDatum


def shuffle_sign(A: Sequence[int], B: Sequence[int]) -> int:
    """Sign of e_A ^ e_B relative to e_{sorted(A u B)}; 0 if A and B overlap."""
    if set(A) & set(B):
        return 0
    inversions = sum(1 for a in A for b in B if a > b)
    return -1 if inversions % 2 else 1


class TorusDHAElem:
    """Element of the torus derived Hecke algebra with coefficients in Z/p^a."""

    __slots__ = ("datum", "p", "a", "support")

    def __init__(self, datum: RootDatum, p: int, a: int, support: Mapping | None = None):
        if not datum.is_torus:
            datum = datum.torus()
        self.datum = datum
        self.p = p
        self.a = a
        mod = p ** a
        r = datum.cochar_rank
        out: dict = {}
        for (mu, wedge), c in (support or {}).items():
            mu = datum.normalize(mu)
            wedge = tuple(wedge)
            if any(wedge[i] >= wedge[i + 1] for i in range(len(wedge) - 1)):
                raise ValueError(f"wedge {wedge} is not strictly increasing")
            if wedge and (wedge[0] < 1 or wedge[-1] > r):
                raise ValueError(f"wedge {wedge} outside 1..{r}")
            key = (mu, wedge)
            out[key] = (out.get(key, 0) + int(c)) % mod
        self.support = {k: v for k, v in out.items() if v}

    @property
    def rank(self) -> int:
        return self.datum.cochar_rank

    @property
    def modulus(self) -> int:
        return self.p ** self.a

    @classmethod
    def monomial(cls, datum: RootDatum, p: int, a: int, mu, wedge=(), coeff: int = 1):
        return cls(datum, p, a, {(tuple(mu), tuple(wedge)): coeff})

    @classmethod
    def from_torus0(cls, T, a: int | None = None) -> "TorusDHAElem":
        """Degree-0 embedding of a classical torus element."""
        a = T.a if a is None else a
        return cls(T.datum, T.p, a, {(mu, ()): c for mu, c in T.support.items()})

    def _like(self, support) -> "TorusDHAElem":
        return TorusDHAElem(self.datum, self.p, self.a, support)

    def _check(self, other: "TorusDHAElem") -> None:
        if not isinstance(other, TorusDHAElem):
            raise TypeError("expected a TorusDHAElem")
        if (self.datum, self.p, self.a) != (other.datum, other.p, other.a):
            raise ContextMismatch("torus DHA elements with different rank, prime or ring")

    def __add__(self, other: "TorusDHAElem") -> "TorusDHAElem":
        self._check(other)
        s = dict(self.support)
        for k, v in other.support.items():
            s[k] = s.get(k, 0) + v
        return self._like(s)

    def __neg__(self) -> "TorusDHAElem":
        return self._like({k: -v for k, v in self.support.items()})

    def __sub__(self, other: "TorusDHAElem") -> "TorusDHAElem":
        return self + (-other)

    def scale(self, c: int) -> "TorusDHAElem":
        return self._like({k: c * v for k, v in self.support.items()})

    def __rmul__(self, c: int) -> "TorusDHAElem":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return dha_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusDHAElem):
            return NotImplemented
        return (self.datum, self.p, self.a, self.support) == (other.datum, other.p, other.a, other.support)

    def __hash__(self):
        return hash((self.datum, self.p, self.a, tuple(sorted(self.support.items()))))

    def is_zero(self) -> bool:
        return not self.support

    def degree_part(self, k: int) -> "TorusDHAElem":
        return self._like({key: v for key, v in self.support.items() if len(key[1]) == k})

    def is_homogeneous(self) -> int | None:
        degs = {len(w) for _, w in self.support}
        return degs.pop() if len(degs) == 1 else (0 if not degs else None)

    def coeff(self, mu, wedge=()) -> int:
        return self.support.get((self.datum.normalize(mu), tuple(wedge)), 0)

    def items(self) -> list:
        return sorted(
            self.support.items(), key=lambda kv: (len(kv[0][1]), self.datum.sort_key(kv[0][0]), kv[0][1])
        )

    def to_json(self) -> dict:
        return {
            "group": self.datum.ambient().to_json(),
            "p": self.p,
            "rank": self.rank,
            "a": self.a,
            "support": [
                {"cochar": list(mu), "wedge": list(w), "coeff": c} for (mu, w), c in self.items()
            ],
        }

    def __repr__(self):
        mod = self.modulus

        def bal(c):
            return c - mod if c > mod // 2 else c

        terms = " + ".join(f"{bal(c)}*({list(mu)},{list(w)})" for (mu, w), c in self.items()) or "0"
        return f"<TorusDHAElem {self.datum.name} {terms}>"


def dha_mul(x: TorusDHAElem, y: TorusDHAElem) -> TorusDHAElem:
    x._check(y)
    out: dict = {}
    for (mu, A), c1 in x.support.items():
        for (nu, B), c2 in y.support.items():
            s = shuffle_sign(A, B)
            if s == 0:
                continue
            key = (x.datum.add(mu, nu), tuple(sorted(A + B)))
            out[key] = out.get(key, 0) + s * c1 * c2
    return x._like(out)


# ----- degree-one generators ---------------------------------------------------------------------


def unit_coordinates(datum: RootDatum, t: PMatrix) -> list:
    """Unit coordinates of t in T(O) matching the cocharacter basis.

    GL: the diagonal entries; PGL: t_i / t_n for i < n; SL: t_1 ... t_i for i < n.
    """
    n = datum.n
    if t.rows != n or t.cols != n:
        raise ValueError(f"expected a {n}x{n} torus element")
    diag = []
    for i in range(n):
        for j in range(n):
            x = t[i, j]
            if i != j and not (x.is_zero() and x.prec >= t.ctx.a + 1):
                raise ValueError("torus element is not diagonal")
        d = t[i, i]
        if d.val == INF or d.val != 0:
            raise ValueError("torus element must have unit diagonal entries")
        diag.append(d)
    if datum.family == "GL":
        return diag
    if datum.family == "PGL":
        return [d / diag[-1] for d in diag[:-1]]
    out, acc = [], None
    for d in diag[:-1]:
        acc = d if acc is None else acc * d
        out.append(acc)
    return out


class TorusCharGenerator:
    """kappa on the i-th unit coordinate (1-based), valued in Z/p^a."""

    def __init__(self, datum: RootDatum, index: int, p: int, a: int):
        if not 1 <= index <= datum.cochar_rank:
            raise ValueError(f"generator index {index} outside 1..{datum.cochar_rank}")
        self.datum = datum
        self.index = index
        self.p = p
        self.a = a

    def __call__(self, t: PMatrix) -> int:
        u = unit_coordinates(self.datum, t)[self.index - 1]
        if u.rel < self.a + 1:
            raise PrecisionError("unit coordinate known to too few digits for kappa")
        return kappa_int(u.unit, self.p, self.a)


def evaluate_deg1(datum: RootDatum, coeffs: Mapping[int, int], t: PMatrix, a: int) -> int:
    """sum coeff_i * kappa_i(t) in Z/p^a."""
    p = t.ctx.p
    units = unit_coordinates(datum, t)
    total = 0
    for i, c in coeffs.items():
        if not 1 <= i <= len(units):
            raise ValueError(f"generator index {i} out of range")
        u = units[i - 1]
        if u.rel < a + 1:
            raise PrecisionError("unit coordinate known to too few digits for kappa")
        total += c * kappa_int(u.unit, p, a)
    return total % p ** a
