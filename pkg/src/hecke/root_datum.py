"""Root data of the built-in split groups GLn, SLn, PGLn and their standard Levis.

Cocharacter coordinates
-----------------------
GLn
    length-n vector ``(m_1, ..., m_n)``; the torus element is ``diag(p^m_1, ..., p^m_n)``.
PGLn
    length-n vector modulo the all-ones vector, stored with last coordinate 0.
SLn
    length-(n-1) vector of simple-coroot coefficients ``c`` so that the
    cocharacter is ``sum c_i (e_i - e_{i+1})``, i.e. the torus element is
    ``diag(p^c_1, p^(c_2 - c_1), ..., p^(-c_{n-1}))``.

The Borel subgroup is upper triangular, so a GLn cocharacter is antidominant
exactly when its coordinates are weakly increasing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError

Cochar = tuple[int, ...]

FAMILIES = ("GL", "SL", "PGL")


def _rational_solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]):
    """Solve ``sum x_i columns[i] = target`` exactly; None if inconsistent.

    Columns are assumed linearly independent.
    """
    m = len(target)
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, m)):
        return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        sol[c] = rows[i][k]
    return sol


@dataclass(frozen=True)
class RootDatum:
    """A type-A group, optionally restricted to a standard block Levi.

    ``blocks`` is a composition of ``n``; ``(n,)`` is the whole group and
    ``(1,) * n`` the maximal torus.
    """

    family: str
    n: int
    blocks: tuple[int, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1 or (self.family != "GL" and self.n < 2):
            raise ValueError(f"bad rank {self.n} for {self.family}")
        if not self.blocks:
            object.__setattr__(self, "blocks", (self.n,))
        if sum(self.blocks) != self.n or min(self.blocks) < 1:
            raise ValueError(f"blocks {self.blocks} do not form a composition of {self.n}")

    # ----- naming and construction -------------------------------------------------

    @property
    def name(self) -> str:
        return f"{self.family}{self.n}"

    @property
    def rank_n(self) -> int:
        return self.n

    @property
    def is_full(self) -> bool:
        return self.blocks == (self.n,)

    @property
    def is_torus(self) -> bool:
        return all(b == 1 for b in self.blocks)

    def ambient(self) -> "RootDatum":
        return RootDatum(self.family, self.n)

    def levi(self, blocks: Sequence[int]) -> "RootDatum":
        blocks = tuple(blocks)
        if not _refines(blocks, self.blocks):
            raise ValueError(f"Levi {blocks} is not contained in {self.blocks}")
        return RootDatum(self.family, self.n, blocks)

    def torus(self) -> "RootDatum":
        return RootDatum(self.family, self.n, (1,) * self.n)

    def to_json(self) -> dict:
        out = {"family": self.family, "n": self.n}
        if not self.is_full:
            out["blocks"] = list(self.blocks)
        return out

    # ----- lattice data ------------------------------------------------------------

    @property
    def cochar_rank(self) -> int:
        return self.n if self.family == "GL" else self.n - 1

    @property
    def coord_length(self) -> int:
        return self.n - 1 if self.family == "SL" else self.n

    def block_of(self) -> tuple[int, ...]:
        """Block index of each GL coordinate."""
        out = []
        for b, size in enumerate(self.blocks):
            out.extend([b] * size)
        return tuple(out)

    def block_ranges(self) -> list[range]:
        out, start = [], 0
        for size in self.blocks:
            out.append(range(start, start + size))
            start += size
        return out

    @property
    def simple_indices(self) -> tuple[int, ...]:
        """Indices i such that e_i - e_{i+1} is a simple root of this (Levi) datum."""
        blk = self.block_of()
        return tuple(i for i in range(self.n - 1) if blk[i] == blk[i + 1])

    def positive_roots(self) -> list[tuple[int, int]]:
        """Positive roots e_i - e_j (i < j) of this datum, as GL matrix positions."""
        blk = self.block_of()
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if blk[i] == blk[j]]

    def _root_vector(self, i: int) -> tuple[int, ...]:
        # e_i - e_{i+1} as a character in this family's coordinates
        if self.family == "SL":
            m = self.n - 1
            return tuple(2 if j == i else (-1 if abs(j - i) == 1 else 0) for j in range(m))
        return tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(self.n))

    def _coroot_vector(self, i: int) -> tuple[int, ...]:
        if self.family == "SL":
            return tuple(1 if j == i else 0 for j in range(self.n - 1))
        v = [1 if j == i else (-1 if j == i + 1 else 0) for j in range(self.n)]
        return self.normalize(v)

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        return [self._root_vector(i) for i in self.simple_indices]

    @property
    def simple_coroots(self) -> list[tuple[int, ...]]:
        return [self._coroot_vector(i) for i in self.simple_indices]

    @property
    def pairing_matrix(self) -> list[list[int]]:
        cor, rts = self.simple_coroots, self.simple_roots
        return [[sum(x * y for x, y in zip(c, r)) for r in rts] for c in cor]

    # ----- coordinates -------------------------------------------------------------

    def normalize(self, mu: Iterable[int]) -> Cochar:
        mu = tuple(int(x) for x in mu)
        if len(mu) != self.coord_length:
            raise ValueError(f"{self.name} cocharacter needs {self.coord_length} coordinates, got {mu}")
        if self.family == "PGL":
            return tuple(x - mu[-1] for x in mu)
        return mu

    def zero(self) -> Cochar:
        return (0,) * self.coord_length

    def add(self, mu: Cochar, nu: Cochar) -> Cochar:
        return self.normalize(x + y for x, y in zip(mu, nu))

    def neg(self, mu: Cochar) -> Cochar:
        return self.normalize(-x for x in mu)

    def to_gl(self, mu: Sequence[int]) -> Cochar:
        """Exponents of the diagonal torus element mu(p) (a GL representative)."""
        mu = self.normalize(mu)
        if self.family == "SL":
            c = (0,) + mu + (0,)
            return tuple(c[i + 1] - c[i] for i in range(self.n))
        return mu

    def from_gl(self, v: Sequence[int]) -> Cochar:
        v = tuple(int(x) for x in v)
        if len(v) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {v}")
        if self.family == "SL":
            if sum(v) != 0:
                raise ValueError(f"{v} is not a cocharacter of SL{self.n}")
            out, s = [], 0
            for x in v[:-1]:
                s += x
                out.append(s)
            return tuple(out)
        return self.normalize(v)

    def pairing(self, mu: Sequence[int], alpha: int) -> int:
        """<mu, alpha_i> for the i-th simple root of this datum."""
        idx = self.simple_indices
        if not 0 <= alpha < len(idx):
            raise IndexError(f"simple root index {alpha} out of range for {self.name} {self.blocks}")
        g = self.to_gl(mu)
        i = idx[alpha]
        return g[i] - g[i + 1]

    def pairings(self, mu: Sequence[int]) -> tuple[int, ...]:
        g = self.to_gl(mu)
        return tuple(g[i] - g[i + 1] for i in self.simple_indices)

    def is_antidominant(self, mu: Sequence[int]) -> bool:
        return all(x <= 0 for x in self.pairings(mu))

    def dominance_leq(self, lam: Sequence[int], mu: Sequence[int]) -> bool:
        """True iff mu - lam is a non-negative rational combination of simple coroots."""
        diff = [Fraction(x - y) for x, y in zip(self.to_gl(mu), self.to_gl(lam))]
        cols = []
        for i in self.simple_indices:
            cols.append([Fraction(1 if j == i else (-1 if j == i + 1 else 0)) for j in range(self.n)])
        k = len(cols)
        if self.family == "PGL":
            cols.append([Fraction(1)] * self.n)
        sol = _rational_solve(cols, diff)
        if sol is None:
            return False
        return all(x >= 0 for x in sol[:k])

    def antidominant_representative(self, valuations: Iterable[int]) -> Cochar:
        """Antidominant cocharacter with the given diagonal exponents (as a multiset per block)."""
        vals = [int(x) for x in valuations]
        if len(vals) != self.n:
            raise ValueError(f"expected {self.n} valuations, got {len(vals)}")
        out = []
        for r in self.block_ranges():
            out.extend(sorted(vals[i] for i in r))
        return self.from_gl(out)

    def rho2(self, mu: Sequence[int]) -> int:
        """<mu, 2 rho> for the full group; strictly increases along dominance."""
        g = self.to_gl(mu)
        n = self.n
        return sum((n - 1 - 2 * i) * x for i, x in enumerate(g))

    def sort_key(self, mu: Sequence[int]):
        return (self.rho2(mu), tuple(mu))

    def antidominant_box(self, height: int) -> list[Cochar]:
        """Antidominant cocharacters whose GL exponents span at most ``height``.

        For GLn the exponents themselves lie in [-height, 0]; for PGLn and SLn
        the condition is ``-<lambda, theta> <= height`` with theta the highest root.
        """
        out = set()
        for v in _weakly_increasing(self.n, -height, 0):
            if self.family == "GL":
                out.add(v)
            elif self.family == "PGL":
                out.add(self.normalize(v))
            else:
                s = sum(v)
                if s % self.n == 0:
                    shift = s // self.n
                    w = tuple(x - shift for x in v)
                    if w[-1] - w[0] <= height:
                        out.add(self.from_gl(w))
        return sorted((m for m in out if self.is_antidominant(m)), key=self.sort_key)


def _refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    cuts_f, cuts_c, s = set(), set(), 0
    for b in fine:
        s += b
        cuts_f.add(s)
    s = 0
    for b in coarse:
        s += b
        cuts_c.add(s)
    return sum(fine) == sum(coarse) and cuts_c <= cuts_f


def _weakly_increasing(n: int, lo: int, hi: int):
    if n == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _weakly_increasing(n - 1, first, hi):
            yield (first,) + rest


_GROUP_RE = re.compile(r"^(GL|SL|PGL)(\d+)$")


def parse_group(text: str) -> RootDatum:
    m = _GROUP_RE.match(text.strip().upper())
    if not m:
        raise ParseError(f"cannot parse group {text!r}; expected e.g. GL2, SL2, PGL3")
    try:
        return RootDatum(m.group(1), int(m.group(2)))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
