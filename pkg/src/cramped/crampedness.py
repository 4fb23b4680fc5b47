"""Finite crampedness certificates and the dimension obstruction."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .branching import EmbeddingSpec, b_of_lambda, invariant_dim

DEFAULT_MMAX = 12


@dataclass(frozen=True)
class CrampednessCertificate:
    """Proof that h is cramped in g, with the bound b(G, H) it yields.

    ``m[i]`` is the least multiple of the i-th fundamental weight carrying an
    h-invariant; ``box`` lists b(lambda) for every nonzero dominant lambda with
    lambda_i < m_i.  Every other b(lambda) is bounded by some box value, so the
    maximum over the box is b(G, H).
    """

    spec: EmbeddingSpec
    m: tuple[int, ...]
    box: tuple[tuple[tuple[int, ...], int], ...]
    b_gh: int
    search_bound: int
    status: str = field(default="certified", init=False)

    def to_document(self) -> dict:
        return {
            "pair": self.spec.name,
            "mMax": self.search_bound,
            "m": list(self.m),
            "box": [{"lambda": list(lam), "b": b} for lam, b in self.box],
            "bGH": self.b_gh,
            "status": self.status,
            "missing": [],
        }


@dataclass(frozen=True)
class Inconclusive:
    """The m_i search hit its bound for ``missing`` (1-based indices); proves nothing."""

    spec: EmbeddingSpec
    missing: tuple[int, ...]
    search_bound: int
    found: tuple[int | None, ...]
    status: str = field(default="inconclusive", init=False)

    def to_document(self) -> dict:
        return {
            "pair": self.spec.name,
            "mMax": self.search_bound,
            "m": list(self.found),
            "box": [],
            "bGH": None,
            "status": self.status,
            "missing": list(self.missing),
        }


def find_mi(spec: EmbeddingSpec, i: int, m_max: int = DEFAULT_MMAX) -> int | None:
    """Least m <= m_max with an h-invariant in V_{m omega_i} (``i`` is 1-based)."""
    rank = spec.g.rank
    if not 1 <= i <= rank:
        raise ValueError(f"index {i} out of range 1..{rank}")
    for m in range(1, m_max + 1):
        lam = tuple(m if j == i - 1 else 0 for j in range(rank))
        if invariant_dim(spec, lam) > 0:
            return m
    return None


def box_weights(m: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Nonzero dominant weights with coordinate i below m[i], in lexicographic order."""
    return [lam for lam in itertools.product(*(range(k) for k in m)) if any(lam)]


def certify(spec: EmbeddingSpec, m_max: int = DEFAULT_MMAX,
            workers: int = 1) -> CrampednessCertificate | Inconclusive:
    rank = spec.g.rank
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        found = tuple(pool.map(lambda i: find_mi(spec, i, m_max), range(1, rank + 1)))
        missing = tuple(i + 1 for i, m in enumerate(found) if m is None)
        if missing:
            return Inconclusive(spec, missing, m_max, found)
        lams = box_weights(found)
        values = list(pool.map(lambda lam: b_of_lambda(spec, lam), lams))
    box = tuple(zip(lams, values))
    return CrampednessCertificate(spec, found, box, max(values, default=1), m_max)


NOT_CRAMPED = "NotCramped"
NO_OBSTRUCTION = "NoObstruction"


def dimension_obstruction(spec: EmbeddingSpec) -> str:
    """``NotCramped`` when T*(K/L) is too small to map onto k*: 2(dim g - dim h) < dim g."""
    dg, dh = spec.g.dimension, spec.h.dimension
    return NOT_CRAMPED if 2 * (dg - dh) < dg else NO_OBSTRUCTION
