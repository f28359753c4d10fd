from itertools import permutations

import pytest

from qtspp.qcomb import orbit_count_total, orbit_product
from qtspp.qfield import Q
from qtspp.tspp import (
    CellDiagram,
    EnumerationLimitError,
    NotSymmetricError,
    PlanePartition,
    enumerate_tspp,
    expand_representatives,
    generating_polynomial,
    is_totally_symmetric,
    orbit_count,
    orbit_of,
    orbit_partition,
    representative_ideals,
    sorted_triples,
)


def downward_closure(cells):
    out = set()
    stack = list(cells)
    while stack:
        c = stack.pop()
        if c in out or min(c) < 1:
            continue
        out.add(c)
        for d in range(3):
            below = list(c)
            below[d] -= 1
            if below[d] >= 1:
                stack.append(tuple(below))
    return frozenset(out)


class TestSymmetryAndOrbits:
    def test_empty_is_symmetric(self):
        assert is_totally_symmetric(CellDiagram(frozenset()))

    def test_corner_cell(self):
        assert is_totally_symmetric(CellDiagram(frozenset({(1, 1, 1)})))

    def test_missing_permutation(self):
        assert not is_totally_symmetric(CellDiagram(frozenset({(1, 1, 1), (1, 1, 2)})))

    def test_orbit_count_empty(self):
        assert orbit_count(CellDiagram(frozenset())) == 0

    def test_full_two_cube(self):
        cube = CellDiagram(frozenset((i, j, k) for i in (1, 2) for j in (1, 2) for k in (1, 2)))
        assert orbit_count(cube) == 4

    def test_orbit_count_rejects_asymmetric(self):
        with pytest.raises(NotSymmetricError):
            orbit_count(CellDiagram(frozenset({(1, 1, 1), (1, 1, 2)})))

    def test_orbit_sizes_from_figure(self):
        # all permutations of (2,4,6) form one orbit of length 6; (1,1,7)
        # gives length 3; a cell on the main diagonal gives length 1
        assert len(orbit_of((2, 4, 6))) == 6
        assert len(orbit_of((1, 1, 7))) == 3
        assert len(orbit_of((4, 4, 4))) == 1
        big = CellDiagram(downward_closure(set(permutations((2, 4, 6)))))
        assert is_totally_symmetric(big)
        orbits = orbit_partition(big)
        assert orbits.orbits[(2, 4, 6)] == orbit_of((2, 4, 6))

    def test_orbit_partition_covers_cells(self):
        for diagram in enumerate_tspp(3):
            orbits = orbit_partition(diagram)
            assert all(len(o) in (1, 3, 6) for o in orbits.orbits.values())
            assert sum(len(o) for o in orbits.orbits.values()) == len(diagram.cells)
            assert len(orbits) == orbit_count(diagram)


class TestEnumeration:
    def test_n0(self):
        diagrams = list(enumerate_tspp(0))
        assert len(diagrams) == 1 and diagrams[0].cells == frozenset()

    def test_n1(self):
        diagrams = list(enumerate_tspp(1))
        assert sorted(len(d.cells) for d in diagrams) == [0, 1]

    def test_n2_orbit_counts(self):
        diagrams = list(enumerate_tspp(2))
        assert len(diagrams) == 5
        assert sorted(orbit_count(d) for d in diagrams) == [0, 1, 2, 3, 4]

    def test_diagrams_unique_and_symmetric(self):
        diagrams = list(enumerate_tspp(3))
        assert len({d.cells for d in diagrams}) == len(diagrams) == 16
        assert all(is_totally_symmetric(d) for d in diagrams)

    def test_counts_match_product(self):
        for n in range(5):
            assert len(list(enumerate_tspp(n))) == orbit_count_total(n)

    def test_cap_error_carries_prediction(self):
        with pytest.raises(EnumerationLimitError) as exc:
            list(enumerate_tspp(9, cap=6))
        assert exc.value.predicted == orbit_count_total(9)

    def test_generating_polynomial_small(self):
        assert generating_polynomial(1) == 1 + Q
        assert generating_polynomial(2) == 1 + Q + Q**2 + Q**3 + Q**4
        for n in range(5):
            assert generating_polynomial(n) == orbit_product(n)


def _box_plane_partitions(n):
    """All weakly decreasing n x n arrays with entries 0..n, generated
    row by row; an independent route to the TSPP diagrams."""

    def rows(prev):
        def fill(row, col):
            if col == n:
                yield tuple(row)
                return
            hi = min(prev[col], row[col - 1] if col else n)
            for v in range(hi, -1, -1):
                row.append(v)
                yield from fill(row, col + 1)
                row.pop()

        yield from fill([], 0)

    def build(rows_so_far, k):
        if k == n:
            yield tuple(rows_so_far)
            return
        prev = rows_so_far[-1] if rows_so_far else (n,) * n
        for row in rows(prev):
            rows_so_far.append(row)
            yield from build(rows_so_far, k + 1)
            rows_so_far.pop()

    yield from build([], 0)


def _array_to_cells(arr):
    return frozenset(
        (i + 1, j + 1, k)
        for i, row in enumerate(arr)
        for j, h in enumerate(row)
        for k in range(1, h + 1)
    )


class TestQuotientPosetSoundness:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_against_array_enumeration(self, n):
        # independent oracle: enumerate all plane partitions in the n-cube
        # as arrays, keep the totally symmetric ones, and compare cell sets
        # with the quotient-poset enumeration
        brute = set()
        for arr in _box_plane_partitions(n):
            cells = _array_to_cells(arr)
            if is_totally_symmetric(CellDiagram(cells)):
                brute.add(cells)
        quotient = {d.cells for d in enumerate_tspp(n)}
        assert quotient == brute

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ideals_expand_to_symmetric_downsets(self, n):
        for reps in representative_ideals(n):
            diagram = expand_representatives(reps)
            assert is_totally_symmetric(diagram)
            assert orbit_count(diagram) == len(reps)

    def test_triples_count(self):
        assert len(sorted_triples(3)) == 10
        assert len(sorted_triples(6)) == 56


class TestPlanePartitionType:
    def test_validation(self):
        with pytest.raises(ValueError):
            PlanePartition(((1, 2),))
        with pytest.raises(ValueError):
            PlanePartition(((2, 2), (3,)))
        with pytest.raises(ValueError):
            PlanePartition(((1,), (1, 1)))
        with pytest.raises(ValueError):
            PlanePartition(((0,),))

    def test_round_trip(self):
        pp = PlanePartition(((3, 2), (2, 1)))
        assert PlanePartition.from_diagram(pp.to_diagram()) == pp
        assert pp.size == 8

    def test_round_trip_all_small(self):
        for diagram in enumerate_tspp(3):
            if not diagram.cells:
                assert PlanePartition.from_diagram(diagram) is None
                continue
            pp = PlanePartition.from_diagram(diagram)
            assert pp.to_diagram().cells == diagram.cells

    def test_diagram_validates_closure(self):
        with pytest.raises(ValueError):
            CellDiagram(frozenset({(2, 1, 1)}))
        with pytest.raises(ValueError):
            CellDiagram(frozenset({(0, 1, 1)}))
