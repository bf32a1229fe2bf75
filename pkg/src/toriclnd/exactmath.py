"""Exact rational linear algebra over lattice-indexed coefficient spaces.

Everything here runs on Python integers and `fractions.Fraction`; nothing ever
rounds.  Lattice points are plain tuples of ints, which makes them hashable,
lexicographically comparable and usable as dict keys for free.

The workhorse is :class:`Echelon`, a sparse reduced-row-echelon accumulator,
and :class:`TruncatedSubspace`, a canonical subspace of the coefficient space
spanned by a fixed, ordered list of monomial exponents.
"""

from __future__ import annotations

import itertools
from bisect import bisect
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Optional, Sequence

Vec = tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in spaces of different rank or over different ambients."""


class DegenerateInputError(ValueError):
    """Input is degenerate for the requested operation (zero vector, empty set, ...)."""


# ---------------------------------------------------------------------------
# integer vectors


def as_vec(coords: Iterable) -> Vec:
    return tuple(int(c) for c in coords)


def pairing(m: Vec, v: Vec) -> int:
    """The natural pairing between a lattice and its dual: sum of m_i * v_i."""
    if len(m) != len(v):
        raise DimensionError(f"rank mismatch: {len(m)} vs {len(v)}")
    return sum(a * b for a, b in zip(m, v))


def vadd(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"rank mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"rank mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return not any(a)


def primitive(v: Vec) -> Vec:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    if g == 0:
        raise DegenerateInputError("zero vector has no primitive representative")
    if g == 1:
        return tuple(v)
    return tuple(c // g for c in v)


def integer_rank(vectors: Sequence[Vec]) -> int:
    """Rank of the span of integer vectors, by fraction-free elimination."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col]:
                a, b = prow[col], rows[i][col]
                rows[i] = [a * x - b * y for x, y in zip(rows[i], prow)]
                g = 0
                for c in rows[i]:
                    g = gcd(g, abs(c))
                if g > 1:
                    rows[i] = [c // g for c in rows[i]]
        rank += 1
        if rank == len(rows):
            break
    return rank


# ---------------------------------------------------------------------------
# lattice point enumeration


def lattice_points_in_box(
    lo: Vec, hi: Vec, predicate: Optional[Callable[[Vec], bool]] = None
) -> list[Vec]:
    """All integer points of the box [lo, hi], lexicographically ordered.

    An empty box (some lo_i > hi_i) yields an empty list.
    """
    if len(lo) != len(hi):
        raise DimensionError(f"rank mismatch: {len(lo)} vs {len(hi)}")
    if any(l > h for l, h in zip(lo, hi)):
        return []
    out = []
    for point in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if predicate is None or predicate(point):
            out.append(point)
    return out


# ---------------------------------------------------------------------------
# sparse reduced echelon forms


class Echelon:
    """Mutable reduced-row-echelon accumulator over sparse rational rows.

    Rows are dicts mapping column index to a nonzero Fraction.  Pivot columns
    are strictly increasing, pivots are normalized to 1, and pivot columns are
    eliminated from every other row, so the stored basis is canonical for the
    row space under the declared column order.
    """

    __slots__ = ("ncols", "pivots", "rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: list[int] = []
        self.rows: list[dict[int, Fraction]] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def residue(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Reduce `vec` against the current rows; returns what is left."""
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for p, row in zip(self.pivots, self.rows):
            c = out.get(p)
            if c:
                for col, val in row.items():
                    nv = out.get(col, 0) - c * val
                    if nv:
                        out[col] = nv
                    else:
                        out.pop(col, None)
        return out

    def insert(self, vec: Mapping[int, Fraction]) -> Optional[dict[int, Fraction]]:
        """Insert a vector; returns the stored normalized row, or None if dependent."""
        res = self.residue(vec)
        if not res:
            return None
        p = min(res)
        if p >= self.ncols or min(res) < 0:
            raise DimensionError(f"column index out of range 0..{self.ncols - 1}")
        inv = res[p]
        newrow = {col: val / inv for col, val in res.items()}
        for row in self.rows:
            c = row.get(p)
            if c:
                for col, val in newrow.items():
                    nv = row.get(col, 0) - c * val
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
        k = bisect(self.pivots, p)
        self.pivots.insert(k, p)
        self.rows.insert(k, newrow)
        return dict(newrow)

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.residue(vec)


def rref(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form of a dense rational matrix (zero rows dropped)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    for row in matrix:
        if len(row) != ncols:
            raise DimensionError("inconsistent row lengths")
    ech = Echelon(ncols)
    for row in matrix:
        ech.insert({j: Fraction(x) for j, x in enumerate(row) if x})
    return [[row.get(j, Fraction(0)) for j in range(ncols)] for row in ech.rows]


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[list[Fraction]]:
    """One exact solution of A x = rhs, or None if the system is inconsistent.

    Free variables are set to zero, so the answer is canonical for a fixed
    column order.
    """
    nrows = len(matrix)
    if len(rhs) != nrows:
        raise DimensionError("right-hand side length does not match row count")
    ncols = len(matrix[0]) if nrows else 0
    aug = ncols  # augmented column sorts after all variables
    ech = Echelon(ncols + 1)
    for row, b in zip(matrix, rhs):
        if len(row) != ncols:
            raise DimensionError("inconsistent row lengths")
        sparse = {j: Fraction(x) for j, x in enumerate(row) if x}
        if b:
            sparse[aug] = Fraction(b)
        ech.insert(sparse)
    if aug in ech.pivots:
        return None
    sol = [Fraction(0)] * ncols
    for p, row in zip(ech.pivots, ech.rows):
        sol[p] = row.get(aug, Fraction(0))
    return sol


# ---------------------------------------------------------------------------
# canonical truncated subspaces


class TruncatedSubspace:
    """Canonical subspace of the coefficient space indexed by `ambient`.

    `ambient` is an ordered tuple of exponent vectors (the monomial index
    set); `rows` hold a reduced echelon basis as sparse index->Fraction dicts.
    Two subspaces compare equal iff they have the same ambient and the same
    canonical basis.
    """

    __slots__ = ("ambient", "_index", "rows", "_key")

    def __init__(self, ambient: Sequence[Vec], echelon: Echelon):
        self.ambient: tuple[Vec, ...] = tuple(ambient)
        if echelon.ncols != len(self.ambient):
            raise DimensionError("echelon width does not match ambient size")
        self._index = {m: i for i, m in enumerate(self.ambient)}
        self.rows: tuple[dict[int, Fraction], ...] = tuple(dict(r) for r in echelon.rows)
        self._key = None

    @classmethod
    def from_vectors(
        cls, ambient: Sequence[Vec], vectors: Iterable[Mapping[int, Fraction]]
    ) -> "TruncatedSubspace":
        ech = Echelon(len(ambient))
        for v in vectors:
            ech.insert(v)
        return cls(ambient, ech)

    @classmethod
    def from_matrix(cls, ambient: Sequence[Vec], matrix: Sequence[Sequence]) -> "TruncatedSubspace":
        vecs = [{j: Fraction(x) for j, x in enumerate(row) if x} for row in matrix]
        return cls.from_vectors(ambient, vecs)

    @classmethod
    def span_of_monomials(cls, ambient: Sequence[Vec], points: Iterable[Vec]) -> "TruncatedSubspace":
        index = {m: i for i, m in enumerate(ambient)}
        vecs = []
        for p in points:
            if p not in index:
                raise DimensionError(f"monomial {p} is not in the ambient index set")
            vecs.append({index[p]: Fraction(1)})
        return cls.from_vectors(ambient, vecs)

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.rows)

    def index_of(self, point: Vec) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise DimensionError(f"monomial {point} is not in the ambient index set") from None

    def _echelon(self) -> Echelon:
        ech = Echelon(len(self.ambient))
        ech.pivots = [min(r) for r in self.rows]
        ech.rows = [dict(r) for r in self.rows]
        return ech

    def contains_vector(self, vec: Mapping[int, Fraction]) -> bool:
        return self._echelon().contains(vec)

    def contains_point_vector(self, terms: Mapping[Vec, Fraction]) -> bool:
        return self.contains_vector({self.index_of(p): c for p, c in terms.items()})

    def contains_subspace(self, other: "TruncatedSubspace") -> bool:
        if other.ambient != self.ambient:
            raise DimensionError("subspaces over different ambient index sets")
        ech = self._echelon()
        return all(ech.contains(row) for row in other.rows)

    def intersect(self, other: "TruncatedSubspace") -> "TruncatedSubspace":
        """Exact intersection via the Zassenhaus doubling trick."""
        if other.ambient != self.ambient:
            raise DimensionError("subspaces over different ambient index sets")
        k = len(self.ambient)
        ech = Echelon(2 * k)
        for row in self.rows:
            doubled = dict(row)
            doubled.update({c + k: v for c, v in row.items()})
            ech.insert(doubled)
        for row in other.rows:
            ech.insert(dict(row))
        inter = Echelon(k)
        for p, row in zip(ech.pivots, ech.rows):
            if p >= k:
                inter.insert({c - k: v for c, v in row.items()})
        return TruncatedSubspace(self.ambient, inter)

    def basis_elements(self) -> list[dict[Vec, Fraction]]:
        """Rows as exponent->coefficient dicts, in canonical order."""
        return [{self.ambient[c]: v for c, v in sorted(row.items())} for row in self.rows]

    def coordinate_vanishes(self, point: Vec) -> bool:
        """True iff every subspace element has zero coefficient at `point`."""
        j = self.index_of(point)
        return all(j not in row for row in self.rows)

    # -- identity -----------------------------------------------------------

    def _canonical_key(self):
        if self._key is None:
            self._key = (
                self.ambient,
                tuple(tuple(sorted(r.items())) for r in self.rows),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, TruncatedSubspace):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __hash__(self):
        return hash(self._canonical_key())

    def __repr__(self):
        return f"TruncatedSubspace(dim={self.dim}, ambient={len(self.ambient)} monomials)"


def subspace_intersect(a: TruncatedSubspace, b: TruncatedSubspace) -> TruncatedSubspace:
    return a.intersect(b)


def subspace_contains(a: TruncatedSubspace, b: TruncatedSubspace) -> bool:
    """True iff b is contained in a."""
    return a.contains_subspace(b)


# ---------------------------------------------------------------------------
# convex hull vertices (tiny point sets, exact feasibility tests)


def _in_convex_hull(p: Vec, others: Sequence[Vec], rank: int) -> bool:
    # Caratheodory: p lies in the hull iff some subset of at most rank+1
    # points contains it; affinely independent subsets have unique barycentric
    # coordinates, so checking the canonical solution of each subset suffices.
    for size in range(1, min(len(others), rank + 1) + 1):
        for subset in itertools.combinations(others, size):
            matrix = [[q[j] for q in subset] for j in range(rank)]
            matrix.append([1] * size)
            rhs = list(p) + [1]
            sol = solve_linear(matrix, rhs)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def hull_vertices(points: Sequence[Vec]) -> list[Vec]:
    """The subset of `points` that are vertices of their convex hull.

    A point is a vertex iff it is not a rational convex combination of the
    other points; this is decided exactly, with no general hull algorithm.
    Input order is preserved (duplicates keep their first occurrence).
    """
    if not points:
        raise DegenerateInputError("hull of an empty point set")
    uniq: list[Vec] = []
    seen = set()
    for p in points:
        t = tuple(p)
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    rank = len(uniq[0])
    for p in uniq:
        if len(p) != rank:
            raise DimensionError("points of mixed rank")
    if len(uniq) == 1:
        return uniq
    return [
        p
        for i, p in enumerate(uniq)
        if not _in_convex_hull(p, uniq[:i] + uniq[i + 1 :], rank)
    ]
