"""Support calculus for generalized Harish-Chandra criteria.

A module V is represented only by its g-support, given as a finite set of
dominant weights together with shifted rays ``base + n * direction``.  For
such supports the asymptotic support is a finite union of rays and the
vagrancy has an exact description, computed below.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .branching import EmbeddingSpec, invariant_dim
from .crampedness import DEFAULT_MMAX, CrampednessCertificate
from .liecore import RootSystem, inner_product, parse_root_system
from .momentgeo import CompactModel, OptimizerConfig, meets_threshold, moment_image_distance


class SupportSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Ray:
    base: tuple[int, ...]
    direction: tuple[int, ...]


@dataclass(frozen=True)
class SupportSpec:
    ambient: str
    system: RootSystem
    finite: tuple[tuple[int, ...], ...] = ()
    rays: tuple[Ray, ...] = ()

    def __post_init__(self) -> None:
        r = self.system.rank
        for w in list(self.finite) + [x for ray in self.rays for x in (ray.base, ray.direction)]:
            if len(w) != r:
                raise SupportSpecError(f"weight {list(w)} does not have rank {r}")
            if any(c < 0 for c in w):
                raise SupportSpecError(f"weight {list(w)} is not dominant")
        if any(not any(ray.direction) for ray in self.rays):
            raise SupportSpecError("ray directions must be nonzero")

    @property
    def is_infinite(self) -> bool:
        return bool(self.rays)

    def points(self, limit_norm: float) -> set[tuple[int, ...]]:
        """Denoted weights of norm at most ``limit_norm``."""
        rs = self.system
        out = {w for w in self.finite if _norm(rs, w) <= limit_norm}
        for ray in self.rays:
            n = 0
            while True:
                w = tuple(b + n * d for b, d in zip(ray.base, ray.direction))
                # norms increase along a ray of dominant weights
                if _norm(rs, w) > limit_norm:
                    break
                out.add(w)
                n += 1
        return out

    def to_document(self) -> dict:
        return {
            "ambient": self.ambient,
            "system": self.system.descriptor,
            "finite": [list(w) for w in self.finite],
            "rays": [{"base": list(r.base), "direction": list(r.direction)} for r in self.rays],
        }


def load_support(document) -> SupportSpec:
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        try:
            document = Path(document).read_text()
        except OSError as exc:
            raise SupportSpecError(f"cannot read support file: {exc}") from None
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SupportSpecError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict) or "system" not in document:
        raise SupportSpecError("support document must be a mapping with a 'system' field")
    try:
        rs = parse_root_system(document["system"])
        finite = tuple(tuple(_int(c) for c in w) for w in document.get("finite", []))
        rays = tuple(Ray(tuple(_int(c) for c in r["base"]), tuple(_int(c) for c in r["direction"]))
                     for r in document.get("rays", []))
    except (KeyError, TypeError, AttributeError) as exc:
        raise SupportSpecError(f"malformed support document: {exc!r}") from None
    except ValueError as exc:
        raise SupportSpecError(str(exc)) from None
    return SupportSpec(str(document.get("ambient", "")), rs, finite, rays)


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SupportSpecError(f"expected an integer coordinate, got {x!r}")
    return x


def _ip(rs: RootSystem, a, b) -> float:
    return float(inner_product(rs, a, b))


def _norm(rs: RootSystem, a) -> float:
    return math.sqrt(_ip(rs, a, a))


def primitive(v: tuple[int, ...]) -> tuple[int, ...]:
    g = math.gcd(*v)
    return tuple(c // g for c in v)


@dataclass(frozen=True)
class Direction:
    primitive: tuple[int, ...]
    unit: tuple[float, ...]


def asymptotic_support(s: SupportSpec) -> list[Direction]:
    """Distinct ray directions of asupp (the point 0 is always implicit)."""
    seen = {}
    for ray in s.rays:
        p = primitive(ray.direction)
        if p not in seen:
            n = _norm(s.system, p)
            seen[p] = Direction(p, tuple(c / n for c in p))
    return [seen[p] for p in sorted(seen)]


def _point_to_ray(rs: RootSystem, p, d) -> float:
    """Distance from p to the closed ray {t d : t >= 0}."""
    pd = _ip(rs, p, d)
    pp = _ip(rs, p, p)
    if pd <= 0:
        return math.sqrt(pp)
    return math.sqrt(max(pp - pd * pd / _ip(rs, d, d), 0.0))


@dataclass
class Vagrancy:
    value: float
    support_to_asymptotic: float
    asymptotic_to_support: float


def vagrancy(s: SupportSpec) -> Vagrancy:
    """Sum of the two one-sided deviations between supp and asupp.

    Points of a ray ``b + n d`` approach their own direction line at the
    orthogonal offset of ``b``; along each asymptotic ray the distance to the
    support is the lower envelope of hyperbolas ``sqrt(o^2 + (t - c)^2)``,
    whose supremum sits at t = 0 or where two branches cross.  The envelope
    is periodic far out, so one period past the last boundary effect suffices.
    """
    rs = s.system
    if not s.finite and not s.rays:
        return Vagrancy(0.0, 0.0, 0.0)
    dirs = [d.primitive for d in asymptotic_support(s)]

    # sup over supp of the distance to asupp
    first = 0.0
    for p in s.finite:
        dist = min([_norm(rs, p)] + [_point_to_ray(rs, p, d) for d in dirs])
        first = max(first, dist)
    for ray in s.rays:
        first = max(first, _point_to_ray_line_offset(rs, ray.base, ray.direction))

    # sup over asupp of the distance to supp
    second = min(_norm(rs, p) for p in _origin_candidates(s))
    for d in dirs:
        second = max(second, _sup_along_direction(s, d))
    return Vagrancy(first + second, first, second)


def _point_to_ray_line_offset(rs: RootSystem, b, d) -> float:
    bd, bb, dd = _ip(rs, b, d), _ip(rs, b, b), _ip(rs, d, d)
    return math.sqrt(max(bb - bd * bd / dd, 0.0))


def _origin_candidates(s: SupportSpec):
    yield from s.finite
    for ray in s.rays:
        yield ray.base


def _sup_along_direction(s: SupportSpec, d: tuple[int, ...]) -> float:
    rs = s.system
    dd = _ip(rs, d, d)
    dn = math.sqrt(dd)
    parallel = [r for r in s.rays if primitive(r.direction) == d]
    period = math.lcm(*(math.gcd(*r.direction) for r in parallel)) * dn
    bound = max(max(_norm(rs, r.base), math.hypot(_point_to_ray_line_offset(rs, r.base, d),
                                                  math.gcd(*r.direction) * dn / 2))
                for r in parallel)
    start = max(_ip(rs, r.base, d) / dn for r in parallel)
    for p in s.finite:
        start = max(start, _norm(rs, p) + bound)
    for r in s.rays:
        if primitive(r.direction) == d:
            continue
        cos = _ip(rs, r.direction, d) / (_norm(rs, r.direction) * dn)
        sin = math.sqrt(max(1.0 - cos * cos, 0.0))
        start = max(start, (bound + _norm(rs, r.base)) / sin)
    end = start + period
    pts = s.points(end + bound + period)
    # each support point gives the hyperbola sqrt(q + (t - c)^2) in t, q = offset^2
    hyp = []
    for p in pts:
        c = _ip(rs, p, d) / dn
        hyp.append((c, max(_ip(rs, p, p) - c * c, 0.0)))
    hyp.sort()
    cands = {0.0, end}
    for (c1, q1), (c2, q2) in itertools.combinations(hyp, 2):
        if c1 != c2:
            t = (q2 - q1 + c2 * c2 - c1 * c1) / (2 * (c2 - c1))
            if 0.0 <= t <= end:
                cands.add(t)
    return max(min(math.sqrt(q + (t - c) ** 2) for c, q in hyp) for t in cands)


YES = "Yes"
UNKNOWN = "UnknownUpTo"


@dataclass(frozen=True)
class ConeMembership:
    status: str
    n: int | None
    bound: int

    def __str__(self) -> str:
        return f"Yes({self.n})" if self.status == YES else f"UnknownUpTo({self.bound})"


def moment_cone_membership(spec: EmbeddingSpec, lam, m_max: int = DEFAULT_MMAX) -> ConeMembership:
    """Least n <= m_max with an h-invariant in V_{n lam}: exact evidence that 0 lies
    in the projection of the orbit of lam."""
    key = tuple(int(c) for c in (lam.coords if hasattr(lam, "coords") else lam))
    if not any(key):
        raise ValueError("moment cone membership is asked for nonzero weights")
    for n in range(1, m_max + 1):
        if invariant_dim(spec, tuple(n * c for c in key)) > 0:
            return ConeMembership(YES, n, m_max)
    return ConeMembership(UNKNOWN, None, m_max)


def n_gamma_sample(spec: EmbeddingSpec, model: CompactModel, gamma: float, box: int,
                   cfg: OptimizerConfig | None = None, workers: int = 1) -> list[tuple[int, ...]]:
    """Dominant weights with coordinates <= box whose numeric distance to im N is <= gamma."""
    out = []
    for lam in itertools.product(range(box + 1), repeat=spec.g.rank):
        if moment_image_distance(model, lam, cfg, workers).distance <= gamma:
            out.append(lam)
    return out


GHC = "GHC"
NOT_GHC = "NotGHC"
UNDETERMINED = "Undetermined"


@dataclass
class GhcVerdict:
    status: str
    per_ray_evidence: list[dict] = field(default_factory=list)
    rationale: str = ""

    def to_document(self) -> dict:
        return {"status": self.status, "perRayEvidence": self.per_ray_evidence,
                "rationale": self.rationale}


def ghc_verdict(spec: EmbeddingSpec, model: CompactModel | None, s: SupportSpec,
                m_max: int = DEFAULT_MMAX, cfg: OptimizerConfig | None = None,
                tol: float = 1e-3, certificate: CrampednessCertificate | None = None,
                workers: int = 1) -> GhcVerdict:
    """Decide whether a (g~, g) GHC module with support ``s`` stays GHC over h."""
    if s.system != spec.g:
        raise SupportSpecError(f"support lives on {s.system}, embedding targets {spec.g}")
    if not s.is_infinite:
        return GhcVerdict(GHC, [], "support is finite, so V is finite-dimensional")
    if certificate is not None:
        if certificate.spec != spec:
            raise ValueError("certificate belongs to a different embedding")
        return GhcVerdict(
            NOT_GHC, [],
            f"h is cramped (certificate bGH={certificate.b_gh}) and V is infinite-dimensional")
    evidence = []
    exact_yes = False
    all_clear = True
    for d in asymptotic_support(s):
        member = moment_cone_membership(spec, d.primitive, m_max)
        row = {"direction": list(d.primitive), "momentConeResult": str(member),
               "numericDistance": None, "numericMeets": None}
        if member.status == YES:
            exact_yes = True
        if model is not None:
            res = moment_image_distance(model, d.primitive, cfg, workers)
            meets = meets_threshold(res, tol)
            row["numericDistance"] = res.distance
            row["numericMeets"] = meets
            if meets:
                all_clear = False
        else:
            all_clear = False
        evidence.append(row)
    if exact_yes:
        witness = next(r for r in evidence if r["momentConeResult"].startswith("Yes"))
        return GhcVerdict(
            NOT_GHC, evidence,
            f"asymptotic direction {witness['direction']} lies in the moment image: "
            f"{witness['momentConeResult']} (exact witness)")
    if all_clear:
        return GhcVerdict(
            GHC, evidence,
            f"no invariants up to n={m_max} on any asymptotic direction and every direction "
            f"stays away from the moment image numerically (evidence)")
    return GhcVerdict(UNDETERMINED, evidence,
                      "no exact witness, but numeric evidence does not separate every "
                      "asymptotic direction from the moment image")
