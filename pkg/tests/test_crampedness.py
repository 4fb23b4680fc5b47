import itertools

import pytest

from cramped.branching import b_of_lambda, catalog_embedding, embedding_from_descriptor
from cramped.crampedness import (
    CrampednessCertificate,
    Inconclusive,
    box_weights,
    certify,
    dimension_obstruction,
    find_mi,
)
from cramped.liecore import weyl_dim


def test_principal_a2_certificate():
    cert = certify(catalog_embedding("principal-sl2", "A2"), 12)
    assert isinstance(cert, CrampednessCertificate)
    assert cert.m == (2, 2)
    assert cert.box == (((0, 1), 3), ((1, 0), 3), ((1, 1), 3))
    assert cert.b_gh == 3
    doc = cert.to_document()
    assert doc["status"] == "certified" and doc["missing"] == []


def test_principal_g2_exponents_of_invariants():
    spec = catalog_embedding("principal-sl2", "G2")
    assert find_mi(spec, 1) == 4
    assert find_mi(spec, 2) == 2


def test_find_mi_range_check():
    with pytest.raises(ValueError):
        find_mi(catalog_embedding("principal-sl2", "A2"), 3)


@pytest.mark.parametrize("pair", ["diagonal:A1", "factor:A1,A1", "principal-sl2:A1"])
def test_non_cramped_pairs_are_inconclusive(pair):
    result = certify(embedding_from_descriptor(pair), 8)
    assert isinstance(result, Inconclusive)
    assert result.missing
    assert result.to_document()["bGH"] is None


def test_box_weights():
    assert box_weights((2, 2)) == [(0, 1), (1, 0), (1, 1)]
    assert box_weights((1, 1)) == []


@pytest.mark.parametrize("desc", ["A2", "B2", "G2"])
def test_certificate_bounds_every_weight(desc):
    spec = catalog_embedding("principal-sl2", desc)
    cert = certify(spec, 12)
    assert isinstance(cert, CrampednessCertificate)
    for lam in itertools.product(range(5), repeat=spec.g.rank):
        if any(lam):
            assert b_of_lambda(spec, lam) <= cert.b_gh


@pytest.mark.parametrize("desc", ["A2", "B2", "G2"])
def test_shift_by_invariant_weight_does_not_grow_b(desc):
    # an invariant in V(m omega_i) injects V(mu) into V(mu + m omega_i) h-equivariantly
    spec = catalog_embedding("principal-sl2", desc)
    cert = certify(spec, 12)
    for i, m in enumerate(cert.m):
        step = tuple(m if j == i else 0 for j in range(spec.g.rank))
        for mu in itertools.product(range(3), repeat=spec.g.rank):
            if any(mu):
                shifted = tuple(a + b for a, b in zip(mu, step))
                assert b_of_lambda(spec, shifted) <= b_of_lambda(spec, mu)


def test_parallel_certificate_matches_serial():
    spec = catalog_embedding("principal-sl2", "G2")
    assert certify(spec, 12, workers=4) == certify(spec, 12, workers=1)


def test_dimension_obstruction():
    assert dimension_obstruction(catalog_embedding("identity", "A2")) == "NotCramped"
    assert dimension_obstruction(catalog_embedding("principal-sl2", "A2")) == "NoObstruction"
    # A1 in A1xA1 sits exactly on the boundary 2(6 - 3) = 6
    assert dimension_obstruction(catalog_embedding("factor", "A1", "A1")) == "NoObstruction"


def test_obstruction_agrees_with_identity_branching():
    # b(G, G) is unbounded: b(lambda) = dim V_lambda
    spec = catalog_embedding("identity", "A2")
    assert [b_of_lambda(spec, (k, 0)) for k in range(1, 4)] == [weyl_dim(spec.g, (k, 0)) for k in range(1, 4)]
