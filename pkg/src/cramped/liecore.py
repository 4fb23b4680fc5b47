"""Exact root systems, weight lattices and characters.

Weights are written in the fundamental-weight basis, so ``mu.coords[i]`` is
the pairing of ``mu`` with the i-th simple coroot.  All arithmetic is exact
(``int`` / ``Fraction``); only :func:`distance` returns a float.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

__all__ = [
    "RootSystem",
    "Weight",
    "Character",
    "build_root_system",
    "parse_root_system",
    "weyl_dim",
    "weight_multiplicities",
    "dominance_reduce",
    "inner_product",
    "distance",
    "norm",
    "dim_bounded_weights",
    "eta_n",
]

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "G": 2}


def _simple_root_gram(family: str, rank: int) -> list[list[Fraction]]:
    """Gram matrix of the simple roots, long roots of squared length 2."""
    n = rank
    gram = [[Fraction(0)] * n for _ in range(n)]
    if family == "G":
        # alpha_1 short, alpha_2 long
        return [[Fraction(2, 3), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    lengths = [Fraction(2)] * n
    if family == "B":
        lengths[-1] = Fraction(1)
    elif family == "C":
        lengths = [Fraction(1)] * (n - 1) + [Fraction(2)]
    for i in range(n):
        gram[i][i] = lengths[i]
    edges = [(i, i + 1) for i in range(n - 1)]
    if family == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    for i, j in edges:
        # adjacent simple roots meet at the angle fixed by the shorter one
        value = -min(lengths[i], lengths[j]) / 2
        if family == "B" and j == n - 1:
            value = Fraction(-1)
        if family == "C" and j == n - 1:
            value = Fraction(-1)
        gram[i][j] = gram[j][i] = value
    return gram


def _invert(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _block_diag(blocks: list[list[list[Fraction]]]) -> list[list[Fraction]]:
    size = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[offset + i][offset + j] = x
        offset += len(b)
    return out


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Root datum of a semisimple Lie algebra, possibly a product of simple factors.

    Equality and hashing go through ``factors`` only; everything else is
    derived from it.
    """

    factors: tuple[tuple[str, int], ...]
    simple_gram: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    cartan_matrix: tuple[tuple[int, ...], ...] = field(repr=False)
    positive_roots_simple: tuple[tuple[int, ...], ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __str__(self) -> str:
        return self.descriptor

    @property
    def descriptor(self) -> str:
        return "x".join(f"{f}{r}" for f, r in self.factors)

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def dimension(self) -> int:
        return self.rank + 2 * len(self.positive_roots_simple)

    @cached_property
    def factor_of_node(self) -> tuple[int, ...]:
        return tuple(k for k, (_, r) in enumerate(self.factors) for _ in range(r))

    @cached_property
    def root_lengths(self) -> tuple[Fraction, ...]:
        """Squared lengths (alpha_i, alpha_i) of the simple roots."""
        return tuple(self.simple_gram[i][i] for i in range(self.rank))

    @cached_property
    def form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Invariant form on the fundamental-weight basis: (omega_i, omega_j)."""
        inv = _invert(self.cartan_matrix)
        d = [x / 2 for x in self.root_lengths]
        return tuple(tuple(inv[i][j] * d[j] for j in range(self.rank))
                     for i in range(self.rank))

    @cached_property
    def inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(row) for row in _invert(self.cartan_matrix))

    @cached_property
    def _int_form(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        den = math.lcm(*(x.denominator for row in self.form for x in row))
        return tuple(tuple(int(x * den) for x in row) for row in self.form), den

    def simple_root(self, i: int) -> tuple[int, ...]:
        """alpha_i in fundamental-weight coordinates (0-based index)."""
        return self.cartan_matrix[i]

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots in fundamental-weight coordinates."""
        return tuple(self.to_weight_coords(c) for c in self.positive_roots_simple)

    @cached_property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def to_weight_coords(self, simple_coords: Sequence[int]) -> tuple[int, ...]:
        a = self.cartan_matrix
        return tuple(sum(c * a[k][j] for k, c in enumerate(simple_coords))
                     for j in range(self.rank))

    def weight(self, coords: Iterable) -> Weight:
        return Weight(tuple(Fraction(c) for c in coords), self)

    def fundamental_weight(self, i: int) -> Weight:
        return self.weight(int(i == j) for j in range(self.rank))

    def zero(self) -> Weight:
        return self.weight([0] * self.rank)

    def scaled_inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Inner product of integral weights times a fixed positive integer."""
        f, _ = self._int_form
        return sum(a[i] * f[i][j] * b[j]
                   for i in range(self.rank) if a[i]
                   for j in range(self.rank) if b[j])

    def reflect(self, mu: Sequence, i: int) -> tuple:
        k = mu[i]
        if not k:
            return tuple(mu)
        ai = self.cartan_matrix[i]
        return tuple(m - k * a for m, a in zip(mu, ai))


@dataclass(frozen=True)
class Weight:
    """A point of the weight space, in the fundamental-weight basis."""

    coords: tuple[Fraction, ...]
    system: RootSystem = field(compare=True, repr=False)

    def __post_init__(self) -> None:
        if len(self.coords) != self.system.rank:
            raise ValueError(
                f"weight has {len(self.coords)} coordinates, {self.system} has rank {self.system.rank}")

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def key(self) -> tuple[int, ...]:
        """Integer coordinate tuple; only defined for integral weights."""
        if not self.is_integral:
            raise ValueError(f"{self} is not integral")
        return tuple(int(c) for c in self.coords)

    def __add__(self, other: Weight) -> Weight:
        _check_same(self.system, other.system)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)), self.system)

    def __sub__(self, other: Weight) -> Weight:
        _check_same(self.system, other.system)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)), self.system)

    def __mul__(self, k) -> Weight:
        return Weight(tuple(c * k for c in self.coords), self.system)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _check_same(a: RootSystem, b: RootSystem) -> None:
    if a != b:
        raise ValueError(f"weights belong to different root systems: {a} vs {b}")


class Character:
    """Finite weight -> multiplicity table, keyed by integer coordinate tuples."""

    def __init__(self, system: RootSystem, mults: dict[tuple[int, ...], int]):
        self.system = system
        self.mults = {k: v for k, v in mults.items() if v}
        if any(v < 0 for v in self.mults.values()):
            raise ValueError("negative multiplicity in character")

    def __getitem__(self, key) -> int:
        if isinstance(key, Weight):
            key = key.key
        return self.mults.get(tuple(key), 0)

    def __len__(self) -> int:
        return len(self.mults)

    def __iter__(self):
        return iter(self.mults)

    def items(self):
        return self.mults.items()

    def weights(self) -> list[Weight]:
        return [self.system.weight(k) for k in self.mults]

    @property
    def total(self) -> int:
        return sum(self.mults.values())

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Character) and self.system == other.system
                and self.mults == other.mults)

    def __repr__(self) -> str:
        return f"Character({self.system}, {len(self.mults)} weights, dim={self.total})"


def _positive_roots_by_closure(cartan: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates via alpha-strings."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            # pairing <beta, alpha_i^vee> = sum_k beta_k A[k][i]
            for i in range(n):
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(beta[k] * cartan[k][i] for k in range(n))
                q = p - pairing
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


@lru_cache(maxsize=None)
def build_root_system(factors: tuple[tuple[str, int], ...]) -> RootSystem:
    """Build the root system of a product of simple factors ``(family, rank)``."""
    factors = tuple((str(f).upper(), int(r)) for f, r in factors)
    if not factors:
        raise ValueError("at least one simple factor is required")
    grams = []
    for family, rank in factors:
        if family not in _MIN_RANK:
            raise ValueError(f"unsupported family {family!r}; expected one of A, B, C, D, G")
        if family == "G" and rank != 2:
            raise ValueError(f"G{rank} is not a root system; only G2 is supported")
        if rank < _MIN_RANK[family]:
            raise ValueError(
                f"{family}{rank}: rank must be at least {_MIN_RANK[family]} for family {family}")
        grams.append(_simple_root_gram(family, rank))
    gram = _block_diag(grams)
    n = len(gram)
    cartan = [[2 * gram[i][j] / gram[j][j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in cartan for x in row):
        raise AssertionError("non-integral Cartan matrix")
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    pos = tuple(_positive_roots_by_closure(cartan))
    return RootSystem(
        factors=factors,
        simple_gram=tuple(tuple(row) for row in gram),
        cartan_matrix=cartan,
        positive_roots_simple=pos,
    )


_DESCRIPTOR = re.compile(r"([ABCDG])(\d+)$")


def parse_root_system(text: str) -> RootSystem:
    """Parse descriptors such as ``"A2"``, ``"a1xA1"`` or ``"G2"``."""
    parts = [p.strip() for p in text.strip().upper().split("X")]
    factors = []
    for p in parts:
        m = _DESCRIPTOR.match(p)
        if not m:
            raise ValueError(f"cannot parse root-system descriptor {text!r}")
        factors.append((m.group(1), int(m.group(2))))
    return build_root_system(tuple(factors))


def _as_key(rs: RootSystem, lam) -> tuple[int, ...]:
    if isinstance(lam, Weight):
        _check_same(rs, lam.system)
        return lam.key
    key = tuple(lam)
    if len(key) != rs.rank or any(Fraction(c).denominator != 1 for c in key):
        raise ValueError(f"{lam!r} is not an integral weight of {rs}")
    return tuple(int(c) for c in key)


def _require_dominant_integral(rs: RootSystem, lam) -> tuple[int, ...]:
    if isinstance(lam, Weight) and not lam.is_integral:
        raise ValueError(f"{lam} is not integral")
    key = _as_key(rs, lam)
    if any(c < 0 for c in key):
        raise ValueError(f"{key} is not dominant")
    return key


def weyl_dim(rs: RootSystem, lam) -> int:
    """Dimension of the irreducible module with highest weight ``lam``."""
    return _weyl_dim(rs, _require_dominant_integral(rs, lam))


@lru_cache(maxsize=65536)
def _weyl_dim(rs: RootSystem, lam: tuple[int, ...]) -> int:
    shifted = tuple(c + 1 for c in lam)
    num = den = 1
    for alpha in rs.positive_roots:
        num *= rs.scaled_inner(shifted, alpha)
        den *= rs.scaled_inner(rs.rho, alpha)
    q, r = divmod(num, den)
    if r:
        raise AssertionError("Weyl dimension is not an integer")
    return q


def _dominant_key(rs: RootSystem, mu: tuple) -> tuple:
    mu = tuple(mu)
    while True:
        for i, c in enumerate(mu):
            if c < 0:
                mu = rs.reflect(mu, i)
                break
        else:
            return mu


def dominance_reduce(rs: RootSystem, mu) -> Weight:
    """The dominant representative of the Weyl orbit of an integral weight."""
    return rs.weight(_dominant_key(rs, _as_key(rs, mu)))


def weyl_orbit(rs: RootSystem, mu: tuple[int, ...]) -> set[tuple[int, ...]]:
    orbit = {tuple(mu)}
    frontier = [tuple(mu)]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(rs.rank):
                r = rs.reflect(w, i)
                if r not in orbit:
                    orbit.add(r)
                    nxt.append(r)
        frontier = nxt
    return orbit


@lru_cache(maxsize=4096)
def _dominant_multiplicities(rs: RootSystem, lam: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Freudenthal recursion over the dominant weights of V_lam."""
    pos = rs.positive_roots
    # dominant weights below lam, by depth (height of lam - mu)
    depth = {lam: 0}
    layer = [lam]
    order = [lam]
    while layer:
        nxt = []
        for mu in layer:
            for alpha in pos:
                nu = tuple(m - a for m, a in zip(mu, alpha))
                if min(nu) >= 0 and nu not in depth:
                    depth[nu] = None
                    nxt.append(nu)
        layer = nxt
        order.extend(nxt)
    # exact depths: height of lam - mu in simple-root coordinates
    inv = rs.inverse_cartan
    height = {}
    for mu in order:
        diff = [l - m for l, m in zip(lam, mu)]
        h = sum(diff[i] * inv[i][j] for i in range(rs.rank) for j in range(rs.rank))
        height[mu] = h
    order.sort(key=lambda mu: (height[mu], tuple(-c for c in mu)))

    lam_rho = tuple(c + 1 for c in lam)
    top = rs.scaled_inner(lam_rho, lam_rho)
    mult = {lam: 1}
    for mu in order[1:]:
        acc = 0
        for alpha in pos:
            k = 1
            while True:
                nu = tuple(m + k * a for m, a in zip(mu, alpha))
                m_nu = mult.get(_dominant_key(rs, nu), 0)
                if not m_nu:
                    break
                acc += m_nu * rs.scaled_inner(nu, alpha)
                k += 1
        mu_rho = tuple(c + 1 for c in mu)
        den = top - rs.scaled_inner(mu_rho, mu_rho)
        q, r = divmod(2 * acc, den)
        if r:
            raise AssertionError(f"Freudenthal produced a non-integer multiplicity at {mu}")
        if q:
            mult[mu] = q
    return mult


def weight_multiplicities(rs: RootSystem, lam) -> Character:
    """Full weight system of V_lam (Freudenthal on dominant weights, then Weyl orbits)."""
    key = _require_dominant_integral(rs, lam)
    return Character(rs, dict(_full_character(rs, key)))


@lru_cache(maxsize=1024)
def _full_character(rs: RootSystem, lam: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = {}
    for mu, m in _dominant_multiplicities(rs, lam).items():
        for w in weyl_orbit(rs, mu):
            out[w] = m
    return tuple(sorted(out.items()))


def inner_product(rs: RootSystem, lam, mu) -> Fraction:
    a = lam.coords if isinstance(lam, Weight) else tuple(Fraction(c) for c in lam)
    b = mu.coords if isinstance(mu, Weight) else tuple(Fraction(c) for c in mu)
    for w in (lam, mu):
        if isinstance(w, Weight):
            _check_same(rs, w.system)
    f = rs.form
    return sum((a[i] * f[i][j] * b[j] for i in range(rs.rank) for j in range(rs.rank)),
               Fraction(0))


def distance(rs: RootSystem, lam, mu) -> float:
    """Euclidean distance in the invariant metric."""
    a = lam.coords if isinstance(lam, Weight) else tuple(Fraction(c) for c in lam)
    b = mu.coords if isinstance(mu, Weight) else tuple(Fraction(c) for c in mu)
    for w in (lam, mu):
        if isinstance(w, Weight):
            _check_same(rs, w.system)
    if len(a) != rs.rank or len(b) != rs.rank:
        raise ValueError("weight rank does not match the root system")
    diff = tuple(x - y for x, y in zip(a, b))
    return math.sqrt(inner_product(rs, diff, diff))


def norm(rs: RootSystem, lam) -> float:
    return distance(rs, lam, [0] * rs.rank)


def dim_bounded_weights(rs: RootSystem, n: int) -> list[Weight]:
    """All dominant integral weights whose irreducible has dimension < n."""
    if n < 1:
        raise ValueError("n must be positive")
    return [rs.weight(k) for k in _dim_bounded(rs, n)]


@lru_cache(maxsize=256)
def _dim_bounded(rs: RootSystem, n: int) -> tuple[tuple[int, ...], ...]:
    zero = (0,) * rs.rank
    if _weyl_dim(rs, zero) >= n:
        return ()
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for mu in frontier:
            for i in range(rs.rank):
                up = mu[:i] + (mu[i] + 1,) + mu[i + 1:]
                # dimension grows strictly along each coordinate: prune here
                if up not in found and _weyl_dim(rs, up) < n:
                    found.add(up)
                    nxt.append(up)
        frontier = nxt
    return tuple(sorted(found))


def eta_n(rs: RootSystem, n: int) -> float:
    """Largest distance to the origin over :func:`dim_bounded_weights`."""
    return max((norm(rs, mu) for mu in _dim_bounded(rs, n)), default=0.0)
