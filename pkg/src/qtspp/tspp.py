"""Brute-force enumeration oracle for the orbit-counting product formula:
totally symmetric plane partitions with bounded largest part, their
S3-orbit structure, and the orbit generating polynomial.

The enumeration walks order ideals of the quotient poset of sorted
triples {1 <= i <= j <= k <= n} (componentwise order); each ideal expands
to an S3-invariant downward-closed cell set in the cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .qcomb import orbit_count_total, orbit_product
from .qfield import Poly

DEFAULT_ENUMERATION_CAP = 6


class EnumerationLimitError(ValueError):
    """Enumeration request above the configured cap."""

    def __init__(self, n: int, cap: int, predicted: int):
        super().__init__(
            f"enumeration too large: n={n} exceeds cap {cap} "
            f"(the product formula predicts {predicted} diagrams)"
        )
        self.n = n
        self.cap = cap
        self.predicted = predicted


class NotSymmetricError(ValueError):
    """Operation requires a totally symmetric diagram."""


@dataclass(frozen=True)
class PlanePartition:
    """Weakly decreasing 2-D array of positive integers."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for r, row in enumerate(self.rows):
            if not row:
                raise ValueError("empty row in plane partition")
            for c, v in enumerate(row):
                if v < 1:
                    raise ValueError("plane partition entries must be positive")
                if c + 1 < len(row) and row[c + 1] > v:
                    raise ValueError("row not weakly decreasing")
                if r + 1 < len(self.rows) and c < len(self.rows[r + 1]) and self.rows[r + 1][c] > v:
                    raise ValueError("column not weakly decreasing")
            if r + 1 < len(self.rows) and len(self.rows[r + 1]) > len(row):
                raise ValueError("row lengths not weakly decreasing")

    @property
    def size(self) -> int:
        return sum(sum(row) for row in self.rows)

    def to_diagram(self) -> "CellDiagram":
        cells = set()
        for r, row in enumerate(self.rows, start=1):
            for c, height in enumerate(row, start=1):
                for k in range(1, height + 1):
                    cells.add((r, c, k))
        return CellDiagram(frozenset(cells))

    @classmethod
    def from_diagram(cls, diagram: "CellDiagram") -> "PlanePartition | None":
        """Heights of the cell stacks; None for the empty partition."""
        if not diagram.cells:
            return None
        heights: dict[tuple[int, int], int] = {}
        for (i, j, k) in diagram.cells:
            key = (i, j)
            if k > heights.get(key, 0):
                heights[key] = k
        nrows = max(i for i, _ in heights)
        rows = []
        for i in range(1, nrows + 1):
            ncols = max((j for (r, j) in heights if r == i), default=0)
            rows.append(tuple(heights[(i, j)] for j in range(1, ncols + 1)))
        return cls(tuple(rows))


@dataclass(frozen=True)
class CellDiagram:
    """Downward-closed finite set of cells (i, j, k), all coordinates >= 1."""

    cells: frozenset[tuple[int, int, int]]

    def __post_init__(self):
        for (i, j, k) in self.cells:
            if min(i, j, k) < 1:
                raise ValueError("cell coordinates must be >= 1")
            for d, v in enumerate((i, j, k)):
                if v > 1:
                    below = [i, j, k]
                    below[d] -= 1
                    if tuple(below) not in self.cells:
                        raise ValueError(f"not downward closed at {(i, j, k)}")

    @property
    def largest_part(self) -> int:
        return max((max(c) for c in self.cells), default=0)

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class OrbitSet:
    """Partition of a diagram's cells into S3-orbits, keyed by the sorted
    representative; orbit sizes are 1, 3 or 6."""

    orbits: dict[tuple[int, int, int], frozenset[tuple[int, int, int]]]

    def __post_init__(self):
        for rep, cells in self.orbits.items():
            if tuple(sorted(rep)) != rep:
                raise ValueError(f"orbit key {rep} is not sorted")
            expected = 1 if rep[0] == rep[2] else (3 if rep[0] == rep[1] or rep[1] == rep[2] else 6)
            if len(cells) != expected:
                raise ValueError(f"orbit of {rep} has size {len(cells)}, expected {expected}")

    def __len__(self):
        return len(self.orbits)


def orbit_of(cell: tuple[int, int, int]) -> frozenset[tuple[int, int, int]]:
    return frozenset(permutations(cell))


def is_totally_symmetric(diagram: CellDiagram) -> bool:
    """True iff the cell set is closed under all coordinate permutations."""
    cells = diagram.cells
    return all(p in cells for c in cells for p in permutations(c))


def orbit_partition(diagram: CellDiagram) -> OrbitSet:
    if not is_totally_symmetric(diagram):
        raise NotSymmetricError("diagram is not closed under coordinate permutations")
    orbits: dict[tuple[int, int, int], frozenset] = {}
    for cell in diagram.cells:
        rep = tuple(sorted(cell))
        if rep not in orbits:
            orbits[rep] = orbit_of(rep)
    return OrbitSet(orbits)


def orbit_count(diagram: CellDiagram) -> int:
    """Number of S3-orbits (= number of distinct sorted triples)."""
    if not is_totally_symmetric(diagram):
        raise NotSymmetricError("diagram is not closed under coordinate permutations")
    return len({tuple(sorted(c)) for c in diagram.cells})


# -- quotient poset of sorted triples --------------------------------------


def sorted_triples(n: int) -> list[tuple[int, int, int]]:
    return [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i, n + 1)
        for k in range(j, n + 1)
    ]


def _lower_covers(t: tuple[int, int, int]) -> set[tuple[int, int, int]]:
    out = set()
    for d in range(3):
        if t[d] > 1:
            dec = list(t)
            dec[d] -= 1
            out.add(tuple(sorted(dec)))
    out.discard(t)
    return out


def representative_ideals(n: int) -> Iterator[frozenset[tuple[int, int, int]]]:
    """All downward-closed subsets of the sorted-triple quotient poset.

    Elements are processed in lexicographic order (a linear extension);
    a triple may join only once all its sorted unit decrements are in.
    """
    elems = sorted(sorted_triples(n))
    index = {t: i for i, t in enumerate(elems)}
    preds = [sorted(index[p] for p in _lower_covers(t)) for t in elems]
    chosen: list[int] = []
    in_set = [False] * len(elems)

    def rec(pos: int) -> Iterator[frozenset]:
        if pos == len(elems):
            yield frozenset(elems[i] for i in chosen)
            return
        yield from rec(pos + 1)  # leave elems[pos] out
        if all(in_set[p] for p in preds[pos]):
            chosen.append(pos)
            in_set[pos] = True
            yield from rec(pos + 1)
            chosen.pop()
            in_set[pos] = False

    return rec(0)


def expand_representatives(reps: frozenset[tuple[int, int, int]]) -> CellDiagram:
    cells: set[tuple[int, int, int]] = set()
    for rep in reps:
        cells.update(permutations(rep))
    return CellDiagram(frozenset(cells))


def enumerate_tspp(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[CellDiagram]:
    """All totally symmetric plane partitions with largest part <= n, as
    cell diagrams, each exactly once."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise EnumerationLimitError(n, cap, orbit_count_total(n))
    for reps in representative_ideals(n):
        yield expand_representatives(reps)


def generating_polynomial(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Poly:
    """Sum of q**orbit_count over all enumerated diagrams."""
    counts: dict[int, int] = {}
    for diagram in enumerate_tspp(n, cap=cap):
        c = orbit_count(diagram)
        counts[c] = counts.get(c, 0) + 1
    return Poly({(e, 0, 0): m for e, m in counts.items()})


def matches_product_formula(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    return generating_polynomial(n, cap=cap) == orbit_product(n)
