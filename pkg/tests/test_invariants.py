import itertools
from fractions import Fraction

import pytest

from toriclnd.derivation import Derivation, find_slice, kernel_basis, kernel_homogeneous
from toriclnd.exactmath import TruncatedSubspace, subspace_contains
from toriclnd.invariants import (
    EmptyFamilyError,
    LOWER_BOUND,
    UPPER_BOUND,
    all_roots_family,
    coefficient_vanishes,
    generate_subalgebra,
    hd_probe,
    hd_star_probe,
    ml_equals_ml_star_check,
    ml_probe,
    slice_admitting_family,
    user_family,
)
from toriclnd.monoid import AffineMonoid, PreconditionError


@pytest.fixture(scope="module")
def device_family(octant, octant_derivations):
    members = [octant_derivations[k] for k in ("d1", "d12", "d13")]
    return user_family(octant, members, slice_degree=4)


# ---------------------------------------------------------------------------
# families


def test_all_roots_family(octant):
    fam = all_roots_family(octant, 3, 10)
    assert fam.kind == "all-roots"
    assert len(fam) == 38
    assert all(len(d.components) == 1 for d in fam.members)
    assert all(d.nilpotency.label == "VerifiedUpToBound" for d in fam.members)


def test_slice_admitting_family(octant):
    fam = slice_admitting_family(octant, 3, 10, 4)
    assert fam.kind == "slice-admitting"
    # the lone slice root plus every locally nilpotent, slice-admitting sum
    assert len(fam) == 25
    assert all(s is not None for s in fam.slices)
    for member, s in zip(fam.members, fam.slices):
        from toriclnd.derivation import AlgebraElement

        assert member.apply(s) == AlgebraElement.one(octant)


def test_slice_admitting_family_empty_for_cusp():
    cusp = AffineMonoid([(2,), (3,)])
    assert len(slice_admitting_family(cusp, 3, 10, 4)) == 0


# ---------------------------------------------------------------------------
# intersection probes


def test_ml_probe_flagship_all_roots(octant):
    fam = all_roots_family(octant, 3, 10)
    probe = ml_probe(fam, 8)
    assert probe.direction == UPPER_BOUND
    assert probe.subspace.dim == 1
    assert probe.subspace.basis_elements()[0] == {(0, 0, 0): Fraction(1)}


def test_ml_probe_flagship_device(octant, device_family):
    probe = ml_probe(device_family, 8)
    assert probe.subspace.dim == 1
    assert probe.subspace.basis_elements()[0] == {(0, 0, 0): Fraction(1)}


def test_ml_probe_single_member_is_kernel(octant, octant_derivations, octant_roots):
    fam = user_family(octant, [octant_derivations["d1"]])
    probe = ml_probe(fam, 5)
    assert probe.subspace == kernel_homogeneous(octant, octant_roots[0], 5)


def test_ml_probe_empty_family(octant):
    from toriclnd.invariants import DerivationFamily

    empty = DerivationFamily(members=(), kind="user-supplied", notes=(), slices=())
    with pytest.raises(EmptyFamilyError):
        ml_probe(empty, 4)


def test_ml_probe_monotone_in_family(octant, octant_derivations):
    d1, d12 = octant_derivations["d1"], octant_derivations["d12"]
    small = ml_probe(user_family(octant, [d1]), 6).subspace
    large = ml_probe(user_family(octant, [d1, d12]), 6).subspace
    assert subspace_contains(small, large)


# ---------------------------------------------------------------------------
# subalgebra generation


def test_generate_single_monomial_powers(octant):
    ambient = octant.truncation_set(6)
    seed = TruncatedSubspace.span_of_monomials(ambient, [(2, 0, 0)])
    out = generate_subalgebra(octant, [seed], 6)
    expected = TruncatedSubspace.span_of_monomials(
        ambient, [(0, 0, 0), (2, 0, 0), (4, 0, 0), (6, 0, 0)]
    )
    assert out == expected


def test_generate_constants_only(octant):
    ambient = octant.truncation_set(4)
    seed = TruncatedSubspace.span_of_monomials(ambient, [(0, 0, 0)])
    out = generate_subalgebra(octant, [seed], 4)
    assert out.dim == 1


def test_generate_is_closure_operator(octant, octant_derivations):
    d12 = octant_derivations["d12"]
    seed = kernel_basis(d12, 4)
    once = generate_subalgebra(octant, [seed], 4)
    assert subspace_contains(once, seed)  # extensive
    again = generate_subalgebra(octant, [once], 4)
    assert once == again  # idempotent
    bigger_seed = kernel_basis(octant_derivations["d1"], 4)
    union = generate_subalgebra(octant, [seed, bigger_seed], 4)
    assert subspace_contains(union, once)  # monotone


def test_generate_matches_bruteforce_products(octant, octant_derivations):
    # oracle at low degree: span of all products of at most three seed basis
    # vectors (degree-filtered), computed directly
    from toriclnd.derivation import AlgebraElement

    d = 3
    ambient = octant.truncation_set(d)
    seeds = [kernel_basis(octant_derivations["d1"], d),
             kernel_basis(octant_derivations["d12"], d)]
    out = generate_subalgebra(octant, seeds, d)

    elements = [AlgebraElement.one(octant)]
    for seed in seeds:
        for row in seed.basis_elements():
            elements.append(AlgebraElement(octant, row))
    index = {m: i for i, m in enumerate(ambient)}
    vectors = []
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(elements, k):
            prod = AlgebraElement.one(octant)
            ok = True
            for f in combo:
                prod = prod * f
                if (prod.degree() or 0) > d:
                    ok = False
                    break
            if ok and not prod.is_zero():
                vectors.append({index[m]: c for m, c in prod.terms.items()})
    brute = TruncatedSubspace.from_vectors(ambient, vectors)
    assert out == brute


def test_hd_probe_flagship_full(octant):
    fam = all_roots_family(octant, 3, 10)
    probe = hd_probe(fam, 8)
    assert probe.direction == LOWER_BOUND
    assert probe.subspace.dim == len(octant.truncation_set(8)) == 149


def test_hd_probe_two_kernels_cover(octant, octant_derivations):
    # the down-z kernel and one tilted kernel already generate everything
    fam = user_family(octant, [octant_derivations["d1"], octant_derivations["d2"]])
    probe = hd_probe(fam, 8)
    assert probe.subspace.dim == 149


def test_hd_probe_single_low_degree(octant, octant_derivations):
    fam = user_family(octant, [octant_derivations["d1"]])
    probe = hd_probe(fam, 2)
    expected = TruncatedSubspace.span_of_monomials(
        octant.truncation_set(2), [(0, 0, 0), (0, 2, 0), (1, 1, 0), (2, 0, 0)]
    )
    assert probe.subspace == expected


def test_hd_star_probe_flagship(octant, device_family):
    probe = hd_star_probe(device_family, 8)
    full = len(octant.truncation_set(8))
    assert probe.subspace.dim < full
    assert coefficient_vanishes(probe.subspace, (0, 0, 1))
    assert not coefficient_vanishes(probe.subspace, (0, 2, 0))


def test_hd_star_probe_default_family_also_misses_z(octant):
    fam = slice_admitting_family(octant, 3, 10, 4)
    probe = hd_star_probe(fam, 6)
    assert probe.subspace.dim < len(octant.truncation_set(6))
    assert coefficient_vanishes(probe.subspace, (0, 0, 1))


def test_hd_beats_hd_star_containment(octant, device_family):
    # with the star family inside the plain family, generation can only grow
    plain_members = list(device_family.members) + [
        m for m in all_roots_family(octant, 2, 10).members
    ]
    plain = hd_probe(user_family(octant, plain_members), 6)
    star = hd_star_probe(device_family, 6)
    assert subspace_contains(plain.subspace, star.subspace)


def test_hd_probe_z_reachable_in_plain_family(octant, octant_derivations):
    fam = user_family(octant, [octant_derivations["d2"]])
    probe = hd_probe(fam, 4)
    assert not coefficient_vanishes(probe.subspace, (0, 0, 1))


def test_hd_star_requires_slices(octant, octant_derivations):
    fam = all_roots_family(octant, 1, 10)
    with pytest.raises(PreconditionError):
        hd_star_probe(fam, 4)


def test_coefficient_vanishes_trivial(octant):
    ambient = octant.truncation_set(3)
    constants = TruncatedSubspace.span_of_monomials(ambient, [(0, 0, 0)])
    assert coefficient_vanishes(constants, (0, 0, 1))
    assert not coefficient_vanishes(constants, (0, 0, 0))


# ---------------------------------------------------------------------------
# probes agree / determinism


def test_probe_results_deterministic(octant):
    fam1 = all_roots_family(octant, 2, 10)
    fam2 = all_roots_family(octant, 2, 10)
    assert ml_probe(fam1, 6).subspace == ml_probe(fam2, 6).subspace
    assert hd_probe(fam1, 5).subspace == hd_probe(fam2, 5).subspace


def test_ml_equals_ml_star_flagship(octant):
    report = ml_equals_ml_star_check(octant, 3, 10, 4, 8)
    assert report.status == "equal"
    assert report.plain.subspace.dim == 1


def test_ml_equals_ml_star_plane_and_space():
    plane = AffineMonoid([(1, 0), (0, 1)])
    assert ml_equals_ml_star_check(plane, 3, 10, 4, 8).status == "equal"
    space = AffineMonoid([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert ml_equals_ml_star_check(space, 3, 10, 4, 8).status == "equal"


def test_ml_equals_ml_star_hypothesis_not_met():
    cusp = AffineMonoid([(2,), (3,)])
    report = ml_equals_ml_star_check(cusp, 3, 10, 4, 8)
    assert report.status == "hypothesis-not-met"
    assert report.plain is None and report.restricted is None
