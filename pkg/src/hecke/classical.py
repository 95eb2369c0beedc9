"""The degree-0 spherical Hecke algebra and its Satake transforms.

Elements are finitely supported functions on K-double cosets, written in the
basis T_lam = 1_{K lam(p) K} with lam antidominant.  Coefficients are integers
(``a=None``) or residues mod p^a.  The Satake transform uses the untwisted
normalization  S(F)(m) = sum over v in V(F)/V(O) of F(m v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cosets import Counter, diag_p, elementary_divisors, mat_mul, unipotent_fiber, unipotent_inverse
from .errors import ContextMismatch, DepthError, ParseError
from .root_datum import Cochar, RootDatum
from .session import Session, default_session


class HeckeElem0:
    """Finitely supported coefficient map on (M-)antidominant cocharacters.

    For a torus datum every cocharacter is allowed and multiplication is the
    group algebra product; otherwise multiplication is convolution.
    """

    __slots__ = ("datum", "p", "a", "support")

    def __init__(self, datum: RootDatum, p: int, a: int | None = None, support: Mapping | None = None):
        self.datum = datum
        self.p = p
        self.a = a
        out: dict = {}
        for mu, c in (support or {}).items():
            mu = datum.normalize(mu)
            if not datum.is_antidominant(mu):
                raise ValueError(f"{mu} is not antidominant for {datum.name} {datum.blocks}")
            out[mu] = out.get(mu, 0) + int(c)
        mod = self.modulus
        if mod is not None:
            out = {k: v % mod for k, v in out.items()}
        self.support = {k: v for k, v in out.items() if v}

    @property
    def modulus(self) -> int | None:
        return None if self.a is None else self.p ** self.a

    @property
    def is_torus(self) -> bool:
        return self.datum.is_torus

    @classmethod
    def basis(cls, datum: RootDatum, p: int, lam: Sequence[int], a: int | None = None):
        return cls(datum, p, a, {tuple(lam): 1})

    @classmethod
    def one(cls, datum: RootDatum, p: int, a: int | None = None):
        return cls(datum, p, a, {datum.zero(): 1})

    def _like(self, support: Mapping) -> "HeckeElem0":
        return type(self)(self.datum, self.p, self.a, support)

    def _check(self, other: "HeckeElem0") -> None:
        if (self.datum, self.p, self.a) != (other.datum, other.p, other.a):
            raise ContextMismatch("Hecke elements over different data, primes or rings")

    def __add__(self, other: "HeckeElem0") -> "HeckeElem0":
        self._check(other)
        s = dict(self.support)
        for k, v in other.support.items():
            s[k] = s.get(k, 0) + v
        return self._like(s)

    def __neg__(self) -> "HeckeElem0":
        return self._like({k: -v for k, v in self.support.items()})

    def __sub__(self, other: "HeckeElem0") -> "HeckeElem0":
        return self + (-other)

    def scale(self, c: int) -> "HeckeElem0":
        return self._like({k: c * v for k, v in self.support.items()})

    def __rmul__(self, c: int) -> "HeckeElem0":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, HeckeElem0):
            return NotImplemented
        self._check(other)
        if self.is_torus:
            s: dict = {}
            for k1, v1 in self.support.items():
                for k2, v2 in other.support.items():
                    k = self.datum.add(k1, k2)
                    s[k] = s.get(k, 0) + v1 * v2
            return self._like(s)
        return convolve0(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElem0):
            return NotImplemented
        return (self.datum, self.p, self.a, self.support) == (other.datum, other.p, other.a, other.support)

    def __hash__(self):
        return hash((self.datum, self.p, self.a, tuple(sorted(self.support.items()))))

    def reduce(self, a: int) -> "HeckeElem0":
        return type(self)(self.datum, self.p, a, self.support)

    def items(self) -> list[tuple[Cochar, int]]:
        """Support in canonical order: dominance-compatible, then lexicographic."""
        return sorted(self.support.items(), key=lambda kv: self.datum.sort_key(kv[0]))

    def coeff(self, mu: Sequence[int]) -> int:
        return self.support.get(self.datum.normalize(mu), 0)

    def signed(self, c: int) -> int:
        """Balanced representative of a coefficient (useful for display)."""
        mod = self.modulus
        if mod is None:
            return c
        c %= mod
        return c - mod if c > mod // 2 else c

    def to_json(self) -> dict:
        out = {
            "group": self.datum.to_json(),
            "p": self.p,
            "ring": "Z" if self.a is None else {"mod_p_power": self.a},
            "support": [{"cochar": list(k), "coeff": v} for k, v in self.items()],
        }
        return out

    @classmethod
    def from_json(cls, obj, datum: RootDatum, p: int, a: int | None):
        try:
            support: dict = {}
            for term in obj["support"]:
                mu = datum.normalize(term["cochar"])
                support[mu] = support.get(mu, 0) + int(term["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed Hecke element: {exc}") from exc
        try:
            return cls(datum, p, a, support)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def __repr__(self):
        terms = " + ".join(f"{self.signed(v)}*T{list(k)}" for k, v in self.items()) or "0"
        return f"<{type(self).__name__} {self.datum.name} {terms}>"


class TorusElem0(HeckeElem0):
    """Element of the group algebra of the cocharacter lattice (target of Satake)."""

    __slots__ = ()

    def __init__(self, datum: RootDatum, p: int, a: int | None = None, support: Mapping | None = None):
        if not datum.is_torus:
            datum = datum.torus()
        super().__init__(datum, p, a, support)


@dataclass(frozen=True)
class LeviDescriptor:
    block_sizes: tuple[int, ...]

    def datum_of(self, g: RootDatum) -> RootDatum:
        return g.levi(self.block_sizes)

    @staticmethod
    def parse(text: str, n: int) -> "LeviDescriptor":
        if text in ("torus", "T"):
            return LeviDescriptor((1,) * n)
        try:
            blocks = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())
        except ValueError as exc:
            raise ParseError(f"bad Levi {text!r}") from exc
        if sum(blocks) != n:
            raise ParseError(f"Levi {blocks} is not a composition of {n}")
        return LeviDescriptor(blocks)


def make_elem(datum: RootDatum, p: int, a: int | None, support: Mapping) -> HeckeElem0:
    cls = TorusElem0 if datum.is_torus else HeckeElem0
    return cls(datum, p, a, support)


# ----- candidate cocharacters ----------------------------------------------------------------


def _compositions(total: int, k: int, lo: int, hi: int):
    """Integer vectors of length k, entries in [lo, hi], summing to total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, hi + 1):
        rest = total - first
        if (k - 1) * lo <= rest <= (k - 1) * hi:
            for tail in _compositions(rest, k - 1, lo, hi):
                yield (first,) + tail


def _dominates(nu: Sequence[int], lam: Sequence[int]) -> bool:
    # GL_k dominance nu >= lam for vectors with equal sums
    s1 = s2 = 0
    for x, y in zip(nu, lam):
        s1 += x
        s2 += y
        if s1 < s2:
            return False
    return True


def _block_targets(lam_block: Sequence[int], sub_blocks: Sequence[int], prune: bool, spread: int = 0):
    lo, hi = min(lam_block) - spread, max(lam_block) + spread
    k = len(lam_block)
    for nu in _compositions(sum(lam_block), k, lo, hi):
        start = 0
        ok = True
        for b in sub_blocks:
            seg = nu[start : start + b]
            if any(seg[i] > seg[i + 1] for i in range(b - 1)):
                ok = False
                break
            start += b
        if ok and (not prune or _dominates(nu, lam_block)):
            yield nu


def levi_targets(
    source: RootDatum, target: RootDatum, lam_gl: Sequence[int], prune: bool = True, spread: int = 0
) -> list[tuple[int, ...]]:
    """GL vectors nu (target-antidominant) that can carry Satake mass from lam.

    The bounds (block sums, entry range, dominance) are necessary conditions;
    ``prune=False`` drops the dominance filter and ``spread`` widens the range,
    so that vanishing outside the cone can be observed rather than assumed.
    """
    per_block = []
    tb = list(target.blocks)
    for r in source.block_ranges():
        size, subs = 0, []
        while size < len(r):
            b = tb.pop(0)
            subs.append(b)
            size += b
        lam_block = [lam_gl[i] for i in r]
        per_block.append(list(_block_targets(lam_block, subs, prune, spread)))
    return [sum(parts, ()) for parts in itertools.product(*per_block)]


def conv_targets(lam_gl, mu_gl, prune: bool = True) -> list[tuple[int, ...]]:
    """Antidominant GL vectors nu that can occur in T_lam * T_mu."""
    base = tuple(x + y for x, y in zip(lam_gl, mu_gl))
    n = len(base)
    lo = min(lam_gl) + min(mu_gl)
    hi = max(lam_gl) + max(mu_gl)
    out = []
    for nu in _compositions(sum(base), n, lo, hi):
        if any(nu[i] > nu[i + 1] for i in range(n - 1)):
            continue
        if prune and not _dominates(nu, base):
            continue
        out.append(nu)
    return out


# ----- Satake ----------------------------------------------------------------------------------


def satake_fiber_count(
    source: RootDatum,
    target: RootDatum,
    p: int,
    lam: Cochar,
    nu_gl: Sequence[int],
    session: Session | None = None,
    slack: int = 0,
) -> int:
    """#{v in V(F)/V(O) : nu(p) v lies in the source-double coset of lam(p)}."""
    session = session or default_session()
    key = ("fiber0", source.family, source.n, source.blocks, target.blocks, p, tuple(lam), tuple(nu_gl), slack)
    hit = session.lookup(key)
    if hit is not None:
        return int(hit)
    lam_gl = list(source.to_gl(lam))
    shift = sum(nu_gl) - sum(lam_gl)
    if shift:
        # only PGL representatives can differ by a central shift
        if source.family != "PGL" or shift % source.n:
            session.store(key, 0)
            return 0
        lam_gl = [x + shift // source.n for x in lam_gl]
    positions = [ij for ij in source.positive_roots() if ij not in set(target.positive_roots())]
    counter = session.counter()
    count = 0
    for _ in unipotent_fiber(p, source, lam_gl, nu_gl, positions, slack=slack, counter=counter):
        count += 1
    session.note_visited(counter)
    session.store(key, count)
    return count


def satake0(
    F: HeckeElem0,
    levi: LeviDescriptor | Sequence[int] | None = None,
    session: Session | None = None,
    prune: bool = True,
    slack: int = 0,
) -> HeckeElem0:
    """Satake transform from F's datum to a standard Levi contained in it (default: the torus)."""
    session = session or default_session()
    source = F.datum
    if levi is None:
        blocks = (1,) * source.n
    elif isinstance(levi, LeviDescriptor):
        blocks = levi.block_sizes
    else:
        blocks = tuple(levi)
    target = source.levi(blocks)
    if source.family != "GL" and not (source.is_full and target.is_torus) and source != target:
        raise ValueError("intermediate Levi subgroups are supported for GLn only")
    out: dict = {}
    verify = session.config.verify_depth
    for lam, c in F.support.items():
        lam_gl = source.to_gl(lam)
        for nu_gl in levi_targets(source, target, lam_gl, prune=prune):
            cnt = satake_fiber_count(source, target, F.p, lam, nu_gl, session, slack)
            if verify:
                _depth_check(source, target, F.p, lam, nu_gl, session, slack, cnt)
            if cnt:
                nu = target.from_gl(nu_gl)
                out[nu] = out.get(nu, 0) + c * cnt
    return make_elem(target, F.p, F.a, out)


def _depth_check(source, target, p, lam, nu_gl, session, slack, cnt) -> None:
    depth_max = session.config.depth_max
    again = satake_fiber_count(source, target, p, lam, nu_gl, session, slack + 1)
    if again != cnt:
        raise DepthError(
            f"fiber count for {lam} at {tuple(nu_gl)} changed from {cnt} to {again} "
            f"when depth grew past slack {slack} (maximum {depth_max})"
        )


# ----- convolution -------------------------------------------------------------------------------


def left_cosets(datum: RootDatum, p: int, lam: Cochar, session: Session | None = None):
    """Representatives (eta_gl, u) of K lam(p) K / K as eta(p) u with u canonical."""
    session = session or default_session()
    torus = datum.torus()
    lam_gl = list(datum.to_gl(lam))
    counter = session.counter()
    for eta in levi_targets(datum, torus, lam_gl, prune=True):
        for u in unipotent_fiber(p, datum, lam_gl, eta, datum.positive_roots(), counter=counter):
            yield eta, u
    session.note_visited(counter)


def structure_constants(
    datum: RootDatum, p: int, lam: Cochar, mu: Cochar, session: Session | None = None
) -> dict[Cochar, int]:
    """Integer coefficients of T_lam * T_mu.

    (T_lam * T_mu)(nu(p)) = #{z in K lam K / K : z^-1 nu(p) in K mu K}.
    """
    session = session or default_session()
    key = ("conv0", datum.family, datum.n, p, tuple(lam), tuple(mu))
    hit = session.lookup(key)
    if hit is not None:
        return {tuple(k): int(v) for k, v in hit}
    lam_gl = datum.to_gl(lam)
    mu_gl = datum.to_gl(mu)
    targets = conv_targets(lam_gl, mu_gl)
    n = datum.n
    counts = {nu: 0 for nu in targets}
    for eta, u in left_cosets(datum, p, lam, session):
        umat = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for (i, j), x in u.items():
            umat[i][j] = x
        uinv = unipotent_inverse(umat)
        for nu in targets:
            h = mat_mul(uinv, diag_p(p, [b - e for b, e in zip(nu, eta)]))
            if datum.antidominant_representative(elementary_divisors(h, p)) == mu:
                counts[nu] += 1
    out: dict = {}
    for nu, c in counts.items():
        if c:
            key_nu = datum.antidominant_representative(nu)
            out[key_nu] = out.get(key_nu, 0) + c
    session.store(key, [[list(k), v] for k, v in sorted(out.items())])
    return out


def convolve0(F1: HeckeElem0, F2: HeckeElem0, session: Session | None = None) -> HeckeElem0:
    F1._check(F2)
    if F1.is_torus:
        return F1 * F2
    if not F1.datum.is_full:
        raise ValueError("convolution is implemented for the full group and for tori")
    out: dict = {}
    for lam, a in F1.support.items():
        for mu, b in F2.support.items():
            for nu, c in structure_constants(F1.datum, F1.p, lam, mu, session).items():
                out[nu] = out.get(nu, 0) + a * b * c
    return HeckeElem0(F1.datum, F1.p, F1.a, out)


# ----- structural checks ---------------------------------------------------------------------------


def check_support_cone(G: HeckeElem0, a: int) -> list[dict]:
    """Support points outside {<lam, alpha> < a} and values not divisible by p^<lam, alpha>."""
    ambient = G.datum.ambient()
    mod = G.p ** a
    report = []
    for mu, c in G.items():
        c %= mod
        if c == 0:
            continue
        for k, h in enumerate(ambient.pairings(mu)):
            if h >= a:
                report.append({"cochar": list(mu), "coeff": c, "root": k, "pairing": h, "reason": "outside cone"})
            elif h > 0 and c % G.p ** h:
                report.append({"cochar": list(mu), "coeff": c, "root": k, "pairing": h, "reason": "not divisible"})
    return report


def transitivity_check(
    F: HeckeElem0, levi: Sequence[int] = (2, 1), session: Session | None = None
) -> tuple[bool, HeckeElem0, HeckeElem0]:
    """Compare S^G_T(F) with S^M_T(S^G_M(F)) for the standard Levi M."""
    if F.datum.family != "GL":
        raise ValueError("transitivity is checked on GLn")
    direct = satake0(F, None, session)
    middle = satake0(F, levi, session)
    via = satake0(middle, None, session)
    return direct == via, direct, via


def random_element(datum: RootDatum, p: int, a: int | None, box: Iterable[Cochar], rng, terms: int = 2):
    box = list(box)
    support = {}
    for lam in rng.sample(box, min(terms, len(box))):
        support[lam] = rng.randrange(1, p ** (a or 1) + (0 if a else 3))
    return HeckeElem0(datum, p, a, support)
