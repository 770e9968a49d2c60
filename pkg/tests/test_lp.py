"""Tests for the exact simplex solver."""
import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.lp import LinearProgram, LpStatus, solve_lp
from src.matrices import rref


class TestSolveLp:
    """Status trichotomy and exact optima."""

    def test_optimal(self):
        p = LinearProgram.build([1], [([1], ">=", 1)])
        solution = solve_lp(p)
        assert solution.status is LpStatus.OPTIMAL
        assert solution.point == (Fraction(1),)
        assert solution.objective == 1

    def test_infeasible(self):
        p = LinearProgram.build([1], [([1], "<=", 0), ([1], ">=", 1)])
        assert solve_lp(p).status is LpStatus.INFEASIBLE

    def test_unbounded_with_ray(self):
        p = LinearProgram.build([-1])
        solution = solve_lp(p)
        assert solution.status is LpStatus.UNBOUNDED
        assert solution.ray == (Fraction(1),)

    def test_free_variable(self):
        p = LinearProgram.build([1], [([1], ">=", -3)], lower=[None])
        solution = solve_lp(p)
        assert solution.point == (Fraction(-3),)

    def test_upper_bounds_and_equalities(self):
        # max x + y s.t. x + 2y = 2, x <= 1
        p = LinearProgram.build([-1, -1], [([1, 2], "=", 2)], upper=[1, None])
        solution = solve_lp(p)
        assert solution.point == (Fraction(1), Fraction(1, 2))
        assert solution.objective == Fraction(-3, 2)

    def test_exact_rationals(self):
        p = LinearProgram.build([1, 1], [([3, 1], ">=", 1), ([1, 3], ">=", 1)])
        solution = solve_lp(p)
        assert solution.objective == Fraction(1, 2)
        assert solution.point == (Fraction(1, 4), Fraction(1, 4))

    def test_degenerate_program_terminates(self):
        # Several constraints tight at the optimum vertex.
        p = LinearProgram.build(
            [-1, -1],
            [([1, 0], "<=", 1), ([0, 1], "<=", 1), ([1, 1], "<=", 2), ([2, 1], "<=", 3)],
        )
        assert solve_lp(p).objective == -2


class TestUniqueness:
    """The optimal-face check behind tie detection."""

    def test_unique_vertex(self):
        p = LinearProgram.build([1, 2], [([1, 1], ">=", 1)])
        solution = solve_lp(p, check_unique=True)
        assert solution.unique is True
        assert solution.point == (Fraction(1), Fraction(0))

    def test_tie_has_witness(self):
        p = LinearProgram.build([1, 1], [([1, 1], ">=", 1)])
        solution = solve_lp(p, check_unique=True)
        assert solution.unique is False
        assert solution.witness != solution.point
        assert p.is_feasible(solution.witness)
        assert p.value(solution.witness) == solution.objective

    def test_free_variables_rejected(self):
        p = LinearProgram.build([1], [([1], ">=", 0)], lower=[None])
        with pytest.raises(ValueError):
            solve_lp(p, check_unique=True)

    def test_mismatched_constraint_width(self):
        with pytest.raises(ValueError):
            LinearProgram.build([1, 1], [([1], "<=", 1)])


def _vertices(A, b, upper):
    """Every vertex of {x | A·x <= b, 0 <= x <= upper}, by solving each choice of n tight constraints."""
    n = len(A[0])
    rows = [(list(a), rhs) for a, rhs in zip(A, b)]
    for i in range(n):
        unit = [0] * n
        unit[i] = 1
        rows.append(([-v for v in unit], 0))
        rows.append((unit, upper))
    vertices = set()
    for tight in itertools.combinations(rows, n):
        reduced, pivots = rref([a + [rhs] for a, rhs in tight])
        if pivots != list(range(n)):
            continue
        x = tuple(row[-1] for row in reduced)
        if all(sum(Fraction(v) * xi for v, xi in zip(a, x)) <= rhs for a, rhs in rows):
            vertices.add(x)
    return vertices


class TestAgainstVertexEnumeration:
    """Random bounded programs checked against brute force over all vertices."""

    @pytest.mark.parametrize("seed,width", [(0, 4), (1, 4), (2, 4), (3, 4), (4, 5), (5, 5)])
    def test_random_programs(self, seed, width):
        rng = np.random.default_rng(seed)
        for _ in range(4):
            A = [[int(v) for v in rng.integers(-3, 4, size=width)] for _ in range(3)]
            b = [int(v) for v in rng.integers(-2, 6, size=3)]
            c = [int(v) for v in rng.integers(-3, 4, size=width)]
            p = LinearProgram.build(c, [(row, "<=", rhs) for row, rhs in zip(A, b)], upper=[2] * width)
            vertices = _vertices(A, b, 2)
            solution = solve_lp(p, check_unique=True)

            if not vertices:
                assert solution.status is LpStatus.INFEASIBLE
                continue
            best = min(p.value(x) for x in vertices)
            optimal = [x for x in vertices if p.value(x) == best]
            assert solution.status is LpStatus.OPTIMAL
            assert solution.objective == best
            assert solution.point in optimal
            assert solution.unique is (len(optimal) == 1)
            if not solution.unique:
                assert p.is_feasible(solution.witness)
                assert p.value(solution.witness) == best
                assert solution.witness != solution.point
