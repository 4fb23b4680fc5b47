import itertools
import json
from collections import Counter
from fractions import Fraction

import pytest

from cramped.branching import (
    CATALOG_PAIRS,
    BracketClosureError,
    InvalidEmbedding,
    MalformedEmbeddingDocument,
    NonIntegralRestriction,
    b_of_lambda,
    branch,
    catalog_embedding,
    dump_embedding,
    embedding_from_descriptor,
    in_d_prime_n,
    invariant_dim,
    load_embedding,
)
from cramped.liecore import weyl_dim


def decomposition(spec, lam):
    return {tuple(mu.key): m for mu, m in branch(spec, lam)}


def _coroot_sum(g):
    """2 rho-check in the simple-coroot basis, from the positive roots."""
    lengths = g.root_lengths
    total = [Fraction(0)] * g.rank
    for beta in g.positive_roots_simple:
        blen = sum(Fraction(bi) * Fraction(bj) * g.simple_gram[i][j]
                   for i, bi in enumerate(beta) for j, bj in enumerate(beta))
        for i, n in enumerate(beta):
            total[i] += n * Fraction(lengths[i]) / blen
    return tuple(total)


@pytest.mark.parametrize("desc", ["A1", "A2", "A3", "B2", "B3", "C3", "G2"])
def test_principal_cartan_is_twice_rho_check(desc):
    spec = catalog_embedding("principal-sl2", desc)
    assert tuple(spec.restriction[0]) == _coroot_sum(spec.g)


def test_principal_values():
    assert catalog_embedding("principal-sl2", "G2").restriction[0] == (6, 10)
    assert catalog_embedding("principal-sl2", "B2").restriction[0] == (4, 3)


@pytest.mark.parametrize("desc,adjoint,exponents", [
    ("A2", (1, 1), (1, 2)),
    ("B2", (0, 2), (1, 3)),
    ("G2", (0, 1), (1, 5)),
    ("A3", (1, 0, 1), (1, 2, 3)),
])
def test_principal_adjoint_follows_exponents(desc, adjoint, exponents):
    spec = catalog_embedding("principal-sl2", desc)
    assert weyl_dim(spec.g, adjoint) == spec.g.dimension
    assert decomposition(spec, adjoint) == {(2 * e,): 1 for e in exponents}


def test_principal_defining_representations_stay_irreducible():
    assert decomposition(catalog_embedding("principal-sl2", "A2"), (1, 0)) == {(2,): 1}
    assert decomposition(catalog_embedding("principal-sl2", "B2"), (1, 0)) == {(4,): 1}
    assert decomposition(catalog_embedding("principal-sl2", "B2"), (0, 1)) == {(3,): 1}
    assert decomposition(catalog_embedding("principal-sl2", "G2"), (1, 0)) == {(6,): 1}


def _sym_invariants(top, m):
    """sl2 invariants in Sym^m of the irreducible with highest weight ``top``."""
    weights = range(-top, top + 1, 2)
    count = Counter(sum(c) for c in itertools.combinations_with_replacement(weights, m))
    return count[0] - count[2]


@pytest.mark.parametrize("m", range(0, 7))
def test_principal_a2_symmetric_powers(m):
    # V(m omega_1) of sl3 is Sym^m of the 3-dimensional representation
    assert invariant_dim(catalog_embedding("principal-sl2", "A2"), (m, 0)) == _sym_invariants(2, m)


@pytest.mark.parametrize("m", range(2, 7))
def test_principal_g2_harmonics(m):
    # Sym^m(7) = V(m omega_1) + Sym^(m-2)(7) for G2
    expected = _sym_invariants(6, m) - _sym_invariants(6, m - 2)
    assert invariant_dim(catalog_embedding("principal-sl2", "G2"), (m, 0)) == expected


def test_sl_in_sl():
    spec = catalog_embedding("sl-in-sl", 2)
    assert decomposition(spec, (1, 0)) == {(1,): 1, (0,): 1}
    assert decomposition(spec, (1, 1)) == {(2,): 1, (1,): 2, (0,): 1}
    assert embedding_from_descriptor("sl(n)-in-sl(n+1):2") == spec


def test_factor_and_identity():
    f = catalog_embedding("factor", "A1", "A1")
    assert decomposition(f, (1, 2)) == {(1,): 3}
    ident = catalog_embedding("identity", "G2")
    assert decomposition(ident, (1, 1)) == {(1, 1): 1}
    assert b_of_lambda(ident, (1, 1)) == 64


@pytest.mark.parametrize("pair", CATALOG_PAIRS)
def test_conservation(pair):
    spec = embedding_from_descriptor(pair)
    for lam in itertools.product(range(3), repeat=spec.g.rank):
        total = sum(m * weyl_dim(spec.h, mu) for mu, m in branch(spec, lam))
        assert total == weyl_dim(spec.g, lam)


def test_b_of_lambda_counts_the_trivial_constituent():
    spec = catalog_embedding("diagonal", "A1")
    assert b_of_lambda(spec, (1, 1)) == 1
    assert b_of_lambda(spec, (2, 1)) == 2
    with pytest.raises(ValueError):
        b_of_lambda(spec, (0, 0))


def test_in_d_prime_n():
    spec = catalog_embedding("principal-sl2", "A2")
    assert in_d_prime_n(spec, (1, 0), 4)
    assert not in_d_prime_n(spec, (1, 0), 3)


@pytest.mark.parametrize("pair", CATALOG_PAIRS)
def test_document_round_trip(pair, tmp_path):
    spec = embedding_from_descriptor(pair)
    doc = dump_embedding(spec)
    assert load_embedding(doc) == spec
    assert load_embedding(json.dumps(doc)) == spec
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    assert load_embedding(str(path)) == spec


def _doc(**overrides):
    doc = {"schema": "cramped.embedding/1", "name": "custom", "g": "A1xA1", "h": "A1",
           "restriction": [[1, 1]],
           "compact_generators": [{"h1": 1, "h2": 1}, {"e_1": 1, "e_2": 1}, {"f_1": 1, "f_2": 1}]}
    doc.update(overrides)
    return doc


def test_load_rejects_non_integral_restriction():
    with pytest.raises(NonIntegralRestriction):
        load_embedding(_doc(restriction=[[1, "1/2"]], compact_generators=None))


def test_load_rejects_non_closed_generators():
    gens = [{"h1": 1, "h2": 1}, {"e_1": 1}, {"f_1": 1, "f_2": 1}]
    with pytest.raises(BracketClosureError):
        load_embedding(_doc(compact_generators=gens))


@pytest.mark.parametrize("bad", [
    "not json", "[]", {"g": "A1"}, _doc(restriction=[[1]]), _doc(g="Q7"),
    _doc(compact_generators=[{"h9": 1}, {"e_1": 1}, {"f_1": 1}]),
])
def test_load_rejects_malformed_documents(bad):
    with pytest.raises(MalformedEmbeddingDocument):
        load_embedding(bad)


def test_invalid_embedding_is_detected_while_branching():
    # (2, 1) sends the weights of the sl3 defining representation to {2, -1, -1},
    # which is not an sl2 character
    spec = load_embedding(_doc(name="skew", g="A2", restriction=[[2, 1]], compact_generators=None))
    with pytest.raises(InvalidEmbedding):
        branch(spec, (1, 0))
