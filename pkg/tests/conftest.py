import pytest

from toriclnd.corpus import DEFAULT_BOUNDS, punctured_octant, standard_corpus
from toriclnd.derivation import Derivation
from toriclnd.roots import root_from_vector


@pytest.fixture(scope="session")
def octant():
    """The non-normal flagship monoid (octant minus two vertical rays)."""
    return punctured_octant().build()


@pytest.fixture(scope="session")
def octant_roots(octant):
    """The three distinguished roots: down-z, y-times-d/dx, x-times-d/dy."""
    return (
        root_from_vector(octant, (0, 0, -1)),
        root_from_vector(octant, (-1, 1, 0)),
        root_from_vector(octant, (1, -1, 0)),
    )


@pytest.fixture(scope="session")
def octant_derivations(octant, octant_roots):
    e1, e2, e3 = octant_roots
    bound = DEFAULT_BOUNDS.degree_bound
    return {
        "d1": Derivation.from_roots(octant, [(1, e1)], bound),
        "d2": Derivation.from_roots(octant, [(1, e2)], bound),
        "d3": Derivation.from_roots(octant, [(1, e3)], bound),
        "d12": Derivation.from_roots(octant, [(1, e1), (1, e2)], bound),
        "d13": Derivation.from_roots(octant, [(1, e1), (1, e3)], bound),
    }


@pytest.fixture(scope="session")
def corpus_monoids():
    return {case.name: case.build() for case in standard_corpus()}
