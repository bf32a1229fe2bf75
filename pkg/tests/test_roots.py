import pytest

from toriclnd.cone import Cone, DegenerateGeometryError
from toriclnd.exactmath import pairing
from toriclnd.monoid import AffineMonoid, PreconditionError
from toriclnd.roots import (
    HoldsUpToBound,
    Violation,
    enumerate_roots,
    is_well_defined,
    lemma_one_check,
    root_from_vector,
    roots_with_slice,
    well_defined_roots,
)


def octant_cone():
    return Cone.from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)


def test_enumerate_roots_octant_bound_1():
    roots = enumerate_roots(octant_cone(), 1)
    assert len(roots) == 12
    # ray index 0 is (0,0,1); its roots keep the last coordinate at -1
    down_z = [r.vector for r in roots if r.ray_index == 0]
    assert down_z == [(0, 0, -1), (0, 1, -1), (1, 0, -1), (1, 1, -1)]


def test_enumerate_roots_conditions_and_order():
    roots = enumerate_roots(octant_cone(), 2)
    rays = octant_cone().generators
    for r in roots:
        assert pairing(r.vector, r.ray) == -1
        for other in rays:
            if other != r.ray:
                assert pairing(r.vector, other) >= 0
    keys = [(r.ray_index, r.vector) for r in roots]
    assert keys == sorted(keys)


def test_enumerate_roots_monotone_in_bound():
    small = {(r.ray_index, r.vector) for r in enumerate_roots(octant_cone(), 1)}
    large = {(r.ray_index, r.vector) for r in enumerate_roots(octant_cone(), 2)}
    assert small <= large


def test_enumerate_roots_half_line():
    # <e, 1> = -1 forces e = -1 regardless of the bound
    c = Cone.from_generators([(1,)], 1)
    assert [r.vector for r in enumerate_roots(c, 2)] == [(-1,)]


def test_enumerate_roots_rejects_nonpointed():
    c = Cone.from_generators([(1, 0), (-1, 0), (0, 1)], 2)
    with pytest.raises(DegenerateGeometryError):
        enumerate_roots(c, 1)


def test_degree_minus_one_census(octant):
    roots = enumerate_roots(octant.cone_sigma, 3)
    minus_one = sorted(r.vector for r in roots if octant.degree(r.vector) == -1)
    assert minus_one == [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]


def test_root_from_vector(octant):
    r = root_from_vector(octant, (-1, 1, 0))
    assert r.ray == (1, 0, 0)
    with pytest.raises(PreconditionError):
        root_from_vector(octant, (1, 1, 0))  # pairs to -1 with no ray
    with pytest.raises(PreconditionError):
        root_from_vector(octant, (-1, -1, 0))  # negative against two rays


def test_well_definedness_flagship(octant):
    down_z = root_from_vector(octant, (0, 0, -1))
    assert isinstance(is_well_defined(octant, down_z, 10), HoldsUpToBound)
    down_x = root_from_vector(octant, (-1, 0, 0))
    verdict = is_well_defined(octant, down_x, 10)
    assert isinstance(verdict, Violation)
    assert verdict.witness == (0, 1, 0)  # (0,1,0) - (-1,0,0) = (1,1,0) in P
    down_y = root_from_vector(octant, (0, -1, 0))
    assert isinstance(is_well_defined(octant, down_y, 10), Violation)


def test_well_definedness_saturated_vacuous():
    plane = AffineMonoid([(1, 0), (0, 1)])
    for r in enumerate_roots(plane.cone_sigma, 3):
        assert isinstance(is_well_defined(plane, r, 8), HoldsUpToBound)


def test_well_defined_roots_flagship_census(octant):
    wd = well_defined_roots(octant, 3, 10)
    # hand count: 14 with distinguished ray (0,0,1) (the pairs (1,0) and
    # (0,1) over x,y are excluded), and 12 each for the other two rays
    assert len(wd) == 38
    by_ray = {}
    for r in wd:
        by_ray[r.ray] = by_ray.get(r.ray, 0) + 1
    assert by_ray == {(0, 0, 1): 14, (1, 0, 0): 12, (0, 1, 0): 12}
    vector_set = {r.vector for r in wd}
    assert (1, 0, -1) not in vector_set
    assert (0, 1, -1) not in vector_set
    assert (1, 1, -1) in vector_set


def test_roots_with_slice(octant):
    assert [r.vector for r in roots_with_slice(octant, 3, 10)] == [(0, 0, -1)]
    plane = AffineMonoid([(1, 0), (0, 1)])
    assert sorted(r.vector for r in roots_with_slice(plane, 1, 8)) == [(-1, 0), (0, -1)]
    cusp = AffineMonoid([(2,), (3,)])
    assert roots_with_slice(cusp, 3, 8) == []


def test_lemma_one_flagship(octant):
    from toriclnd.monoid import HoleFreeUpToBound

    expected_roots = {0: (0, 0, -1), 1: (1, -1, 0), 2: (-1, 1, 0)}
    for i in range(3):
        rep = lemma_one_check(octant, i, 3, 10)
        assert rep.verdict == "agree-yes"
        assert rep.root_witness.vector == expected_roots[i]
        # the reported witness really is a saturation point at the bound
        assert isinstance(
            octant.is_saturation_point(rep.saturation_witness, 10), HoleFreeUpToBound
        )


def test_lemma_one_cusp_agree_no():
    cusp = AffineMonoid([(2,), (3,)])
    rep = lemma_one_check(cusp, 0, 5, 8)
    assert rep.verdict == "agree-no"
    assert rep.root_witness is None and rep.saturation_witness is None


def test_lemma_one_full_corpus(corpus_monoids):
    for name, monoid in corpus_monoids.items():
        for i in range(len(monoid.cone_sigma.generators)):
            rep = lemma_one_check(monoid, i, 3, 10)
            assert rep.verdict in ("agree-yes", "agree-no"), (name, i, rep)


def test_roots_recheck_defining_inequalities(octant):
    for r in enumerate_roots(octant.cone_sigma, 2):
        assert pairing(r.vector, r.ray) == -1
        assert all(
            pairing(r.vector, other) >= 0
            for other in octant.cone_sigma.generators
            if other != r.ray
        )
