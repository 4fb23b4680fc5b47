"""Subalgebra inclusions h in g and restriction of irreducible g-modules."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .liecore import (
    RootSystem,
    Weight,
    _full_character,
    _invert,
    _require_dominant_integral,
    _weyl_dim,
    build_root_system,
    parse_root_system,
)
from .realization import realize, span_is_subalgebra

SCHEMA = "cramped.embedding/1"

CATALOG_NAMES = ("principal-sl2", "diagonal", "factor", "sl-in-sl", "identity")

# pairs exercised by the acceptance suite and the CLI defaults
CATALOG_PAIRS = (
    "principal-sl2:A1",
    "diagonal:A1",
    "factor:A1,A1",
    "principal-sl2:A2",
    "sl-in-sl:2",
    "principal-sl2:B2",
    "principal-sl2:G2",
)


class EmbeddingError(ValueError):
    """Base class for rejected embedding specifications."""


class MalformedEmbeddingDocument(EmbeddingError):
    pass


class NonIntegralRestriction(EmbeddingError):
    pass


class BracketClosureError(EmbeddingError):
    pass


class InvalidEmbedding(EmbeddingError):
    """Raised when a restriction matrix does not come from a Lie algebra inclusion."""


Generator = tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class EmbeddingSpec:
    """An inclusion h in g.

    ``restriction`` is a rank(h) x rank(g) matrix acting on fundamental-weight
    coordinates.  ``compact_generators``, when present, is a basis of h written
    in the Chevalley basis of g (see :mod:`cramped.realization`); its first
    rank(h) entries are the simple coroots of h and must reproduce the rows of
    ``restriction``.
    """

    name: str
    g: RootSystem
    h: RootSystem
    restriction: tuple[tuple[Fraction, ...], ...]
    compact_generators: tuple[Generator, ...] | None = None

    def __post_init__(self) -> None:
        _validate(self)

    @property
    def generator_maps(self) -> list[dict[str, Fraction]] | None:
        if self.compact_generators is None:
            return None
        return [dict(gen) for gen in self.compact_generators]

    def restrict_weight(self, lam) -> Weight:
        coords = lam.coords if isinstance(lam, Weight) else tuple(Fraction(c) for c in lam)
        if isinstance(lam, Weight) and lam.system != self.g:
            raise ValueError(f"weight of {lam.system} given to an embedding into {self.g}")
        if len(coords) != self.g.rank:
            raise ValueError("weight rank does not match g")
        return self.h.weight(sum(r * c for r, c in zip(row, coords)) for row in self.restriction)

    def __str__(self) -> str:
        return self.name


def _validate(spec: EmbeddingSpec) -> None:
    g, h, res = spec.g, spec.h, spec.restriction
    if len(res) != h.rank or any(len(row) != g.rank for row in res):
        raise MalformedEmbeddingDocument(
            f"restriction must be {h.rank} x {g.rank}, got {len(res)} rows")
    for j in range(g.rank):
        image = [res[k][j] for k in range(h.rank)]
        if any(Fraction(x).denominator != 1 for x in image):
            raise NonIntegralRestriction(
                f"fundamental weight omega_{j + 1} of {g} restricts to non-integral weight "
                f"({', '.join(str(x) for x in image)}) of {h}")
    if spec.compact_generators is None:
        return
    real = realize(g)
    gens = spec.compact_generators
    if len(gens) != h.dimension:
        raise MalformedEmbeddingDocument(
            f"expected {h.dimension} generators spanning {h}, got {len(gens)}")
    try:
        mats = [real.element({lab: complex(c) for lab, c in gen}) for gen in gens]
    except KeyError as exc:
        raise MalformedEmbeddingDocument(str(exc)) from None
    flat = np.array([m.ravel() for m in mats])
    if np.linalg.matrix_rank(flat, tol=1e-9) != len(gens):
        raise MalformedEmbeddingDocument("compact generators are linearly dependent")
    bad = span_is_subalgebra(real, mats)
    if bad is not None:
        raise BracketClosureError(
            f"bracket of generators {bad[0] + 1} and {bad[1] + 1} leaves their span")
    cartan_labels = {f"h{i + 1}" for i in range(g.rank)}
    for k in range(h.rank):
        gen = dict(gens[k])
        if any(lab not in cartan_labels for lab in gen):
            raise MalformedEmbeddingDocument(
                f"generator {k + 1} should be the coroot h{k + 1} of {h} but has root components")
        row = tuple(Fraction(gen.get(f"h{i + 1}", 0)) for i in range(g.rank))
        if row != tuple(Fraction(x) for x in res[k]):
            raise MalformedEmbeddingDocument(
                f"Cartan part of generator {k + 1} does not match restriction row {k + 1}")


def _gen(pairs) -> Generator:
    return tuple(sorted(((lab, Fraction(c)) for lab, c in pairs if c), key=lambda p: p[0]))


def _root_index(rs: RootSystem, simple_coords) -> int:
    return rs.positive_roots_simple.index(tuple(simple_coords)) + 1


def _basis_generators(h: RootSystem, g: RootSystem, embeds) -> list[Generator]:
    """Full basis of h pushed into g; ``embeds`` lists (node offset) copies of h."""
    gens = []
    for i in range(h.rank):
        gens.append(_gen((f"h{off + i + 1}", 1) for off in embeds))
    for prefix in ("e", "f"):
        for beta in h.positive_roots_simple:
            labels = []
            for off in embeds:
                full = [0] * g.rank
                full[off:off + h.rank] = beta
                labels.append((f"{prefix}_{_root_index(g, full)}", 1))
            gens.append(_gen(labels))
    return gens


def _principal(g: RootSystem) -> EmbeddingSpec:
    n = g.rank
    # alpha_i(H) = sum_j A[i][j] c_j = 2 for every i
    inv = _invert(g.cartan_matrix)
    c = [sum(inv[i][j] * 2 for j in range(n)) for i in range(n)]
    h = build_root_system((("A", 1),))
    unit = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    gens = [
        _gen((f"h{i + 1}", c[i]) for i in range(n)),
        _gen((f"e_{_root_index(g, unit[i])}", 1) for i in range(n)),
        _gen((f"f_{_root_index(g, unit[i])}", c[i]) for i in range(n)),
    ]
    return EmbeddingSpec(f"principal-sl2:{g}", g, h, (tuple(c),), tuple(gens))


def catalog_embedding(name: str, *params: str) -> EmbeddingSpec:
    """Catalog inclusions.

    ``principal-sl2(g)``, ``diagonal(h)`` (h in h x h), ``factor(h, h')``
    (h as the first factor of h x h'), ``sl-in-sl(n)`` (sl(n) in sl(n+1),
    upper-left block) and ``identity(g)``.
    """
    key = name.lower().replace("sl(n)-in-sl(n+1)", "sl-in-sl")
    try:
        if key == "principal-sl2":
            (g,) = params
            return _principal(parse_root_system(g))
        if key == "identity":
            (g,) = params
            g = parse_root_system(g)
            eye = tuple(tuple(Fraction(int(i == j)) for j in range(g.rank)) for i in range(g.rank))
            return EmbeddingSpec(f"identity:{g}", g, g, eye, tuple(_basis_generators(g, g, [0])))
        if key == "diagonal":
            (h,) = params
            h = parse_root_system(h)
            g = build_root_system(h.factors + h.factors)
            r = h.rank
            res = tuple(tuple(Fraction(int(j % r == i)) for j in range(2 * r)) for i in range(r))
            return EmbeddingSpec(f"diagonal:{h}", g, h, res,
                                 tuple(_basis_generators(h, g, [0, r])))
        if key == "factor":
            first, second = params
            h = parse_root_system(first)
            other = parse_root_system(second)
            g = build_root_system(h.factors + other.factors)
            res = tuple(tuple(Fraction(int(j == i)) for j in range(g.rank)) for i in range(h.rank))
            return EmbeddingSpec(f"factor:{h},{other}", g, h, res,
                                 tuple(_basis_generators(h, g, [0])))
        if key == "sl-in-sl":
            (n,) = params
            n = int(n)
            if n < 2:
                raise EmbeddingError("sl-in-sl needs n >= 2")
            h = build_root_system((("A", n - 1),))
            g = build_root_system((("A", n),))
            res = tuple(tuple(Fraction(int(j == i)) for j in range(n)) for i in range(n - 1))
            return EmbeddingSpec(f"sl-in-sl:{n}", g, h, res, tuple(_basis_generators(h, g, [0])))
    except EmbeddingError:
        raise
    except (ValueError, TypeError) as exc:
        raise EmbeddingError(f"bad parameters for catalog embedding {name!r}: {exc}") from None
    raise EmbeddingError(f"unknown catalog embedding {name!r}; known: {', '.join(CATALOG_NAMES)}")


def embedding_from_descriptor(text: str) -> EmbeddingSpec:
    """Parse ``"principal-sl2:A2"``, ``"diagonal:A1"``, ``"factor:A1,A1"``, ``"sl-in-sl:2"``."""
    name, _, rest = text.partition(":")
    params = [p for p in rest.split(",") if p] if rest else []
    return catalog_embedding(name, *params)


def _fraction(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise MalformedEmbeddingDocument(f"expected an integer or 'p/q' string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise MalformedEmbeddingDocument(f"cannot parse rational {x!r}") from None


def _encode(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def dump_embedding(spec: EmbeddingSpec) -> dict:
    doc = {
        "schema": SCHEMA,
        "name": spec.name,
        "g": spec.g.descriptor,
        "h": spec.h.descriptor,
        "restriction": [[_encode(x) for x in row] for row in spec.restriction],
    }
    if spec.compact_generators is not None:
        doc["compact_generators"] = [{lab: _encode(c) for lab, c in gen}
                                     for gen in spec.compact_generators]
    return doc


def load_embedding(document) -> EmbeddingSpec:
    """Validate an embedding document (dict, JSON text or path)."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        try:
            document = Path(document).read_text()
        except OSError as exc:
            raise MalformedEmbeddingDocument(f"cannot read embedding file: {exc}") from None
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedEmbeddingDocument(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise MalformedEmbeddingDocument("embedding document must be a mapping")
    if document.get("schema", SCHEMA) != SCHEMA:
        raise MalformedEmbeddingDocument(f"unsupported schema {document.get('schema')!r}")
    missing = [k for k in ("name", "g", "h", "restriction") if k not in document]
    if missing:
        raise MalformedEmbeddingDocument(f"missing fields: {', '.join(missing)}")
    try:
        g = parse_root_system(document["g"])
        h = parse_root_system(document["h"])
    except (ValueError, AttributeError) as exc:
        raise MalformedEmbeddingDocument(str(exc)) from None
    rows = document["restriction"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedEmbeddingDocument("restriction must be a list of rows")
    restriction = tuple(tuple(_fraction(x) for x in row) for row in rows)
    gens = document.get("compact_generators")
    if gens is not None:
        if not isinstance(gens, list) or not all(isinstance(x, dict) for x in gens):
            raise MalformedEmbeddingDocument("compact_generators must be a list of mappings")
        gens = tuple(_gen((str(lab), _fraction(c)) for lab, c in gen.items()) for gen in gens)
    return EmbeddingSpec(str(document["name"]), g, h, restriction, gens)


def _height(rs: RootSystem, mu) -> Fraction:
    inv = rs.inverse_cartan
    return sum((mu[i] * inv[i][j] for i in range(rs.rank) for j in range(rs.rank)), Fraction(0))


def restricted_character(spec: EmbeddingSpec, lam) -> dict[tuple[int, ...], int]:
    key = _require_dominant_integral(spec.g, lam)
    res = [[int(x) for x in row] for row in spec.restriction]
    out: dict[tuple[int, ...], int] = {}
    for mu, m in _full_character(spec.g, key):
        nu = tuple(sum(r * c for r, c in zip(row, mu)) for row in res)
        out[nu] = out.get(nu, 0) + m
    return out


def branch(spec: EmbeddingSpec, lam) -> list[tuple[Weight, int]]:
    """Decompose V_lam restricted to h into (highest weight, multiplicity) pairs."""
    key = _require_dominant_integral(spec.g, lam)
    return [(spec.h.weight(mu), m) for mu, m in _branch(spec, key)]


@lru_cache(maxsize=8192)
def _branch(spec: EmbeddingSpec, lam: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    h = spec.h
    residual = restricted_character(spec, lam)
    out = []
    while residual:
        top = max(residual, key=lambda mu: (_height(h, mu), mu))
        if min(top) < 0:
            raise InvalidEmbedding(
                f"{spec.name}: highest remaining weight {top} of V{lam} is not dominant")
        m = residual[top]
        if m < 0:
            raise InvalidEmbedding(f"{spec.name}: negative multiplicity while branching V{lam}")
        out.append((top, m))
        for mu, k in _full_character(h, top):
            left = residual.get(mu, 0) - m * k
            if left < 0:
                raise InvalidEmbedding(
                    f"{spec.name}: negative residual multiplicity at {mu} while branching V{lam}")
            if left:
                residual[mu] = left
            else:
                residual.pop(mu, None)
    return tuple(sorted(out))


def invariant_dim(spec: EmbeddingSpec, lam) -> int:
    """Dimension of the h-invariants in V_lam."""
    key = _require_dominant_integral(spec.g, lam)
    zero = (0,) * spec.h.rank
    return dict(_branch(spec, key)).get(zero, 0)


def b_of_lambda(spec: EmbeddingSpec, lam) -> int:
    """Dimension of the smallest irreducible h-constituent of V_lam (lam nonzero)."""
    key = _require_dominant_integral(spec.g, lam)
    if not any(key):
        raise ValueError("b(lambda) is defined for nonzero weights only")
    return min(_weyl_dim(spec.h, mu) for mu, _ in _branch(spec, key))


def in_d_prime_n(spec: EmbeddingSpec, lam, n: int) -> bool:
    return b_of_lambda(spec, lam) < n
