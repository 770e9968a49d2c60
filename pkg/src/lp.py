"""Exact two-phase simplex over the rationals.

Every decoder and certifier in the package builds a `LinearProgram` and
hands it to `solve_lp`. Arithmetic is exact (`Fraction`), pivoting follows
Bland's rule (lowest eligible index enters, lowest basic index leaves on a
ratio tie), so results are reproducible and the method terminates.

Programs are converted to the standard form min c·y, A·y = b, y >= 0 by
shifting/splitting variables and adding slack columns; the returned point
and ray are mapped back to the original variables.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .matrices import Number, RealVector, to_fraction

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def holds(self, x: Sequence[Fraction]) -> bool:
        value = sum((a * v for a, v in zip(self.coefficients, x)), ZERO)
        if self.relation is Relation.LE:
            return value <= self.rhs
        if self.relation is Relation.GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """
    minimize objective·x subject to constraints and per-variable bounds.

    A bound of None means infinite in that direction.
    """
    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...]
    lower: Tuple[Optional[Fraction], ...]
    upper: Tuple[Optional[Fraction], ...]

    def __post_init__(self):
        n = len(self.objective)
        for k, con in enumerate(self.constraints):
            if len(con.coefficients) != n:
                raise ValueError(
                    f"Constraint {k} has {len(con.coefficients)} coefficients, expected {n}"
                )
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("Bounds must have one entry per variable")

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    @classmethod
    def build(
        cls,
        objective: Sequence[Number],
        constraints: Sequence[Tuple[Sequence[Number], str, Number]] = (),
        lower: Optional[Sequence[Optional[Number]]] = None,
        upper: Optional[Sequence[Optional[Number]]] = None,
    ) -> "LinearProgram":
        """
        Convenience constructor from plain numbers.

        Args:
            objective: cost vector c (minimized)
            constraints: (row, relation, rhs) triples with relation in {"<=", "=", ">="}
            lower: lower bounds, default 0 for every variable; None entries are -inf
            upper: upper bounds, default +inf; None entries are +inf
        """
        n = len(objective)
        if lower is None:
            lower = [0] * n
        if upper is None:
            upper = [None] * n
        return cls(
            objective=tuple(to_fraction(c) for c in objective),
            constraints=tuple(
                Constraint(tuple(to_fraction(a) for a in row), Relation(rel), to_fraction(rhs))
                for row, rel, rhs in constraints
            ),
            lower=tuple(None if v is None else to_fraction(v) for v in lower),
            upper=tuple(None if v is None else to_fraction(v) for v in upper),
        )

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        """Exact feasibility of a point (constraints and bounds)."""
        for v, lo, hi in zip(x, self.lower, self.upper):
            if lo is not None and v < lo:
                return False
            if hi is not None and v > hi:
                return False
        return all(con.holds(x) for con in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)


@dataclass(frozen=True)
class LpSolution:
    """
    Solver verdict.

    `point`/`objective` are set when optimal, `ray` when unbounded. With
    `check_unique`, `unique` tells whether the optimum is the only optimal
    point and `witness` holds a different optimal point when it is not.
    """
    status: LpStatus
    point: Optional[RealVector] = None
    objective: Optional[Fraction] = None
    ray: Optional[RealVector] = None
    unique: Optional[bool] = None
    witness: Optional[RealVector] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


# ---------------------------------------------------------------------------
# Standard form
# ---------------------------------------------------------------------------

@dataclass
class _StandardForm:
    A: List[List[Fraction]]
    b: List[Fraction]
    c: List[Fraction]
    # x_j = offsets[j] + sum(sign * y_k for k, sign in terms[j])
    offsets: List[Fraction]
    terms: List[List[Tuple[int, int]]]
    constant: Fraction

    def to_original(self, y: Sequence[Fraction], with_offset: bool = True) -> RealVector:
        return tuple(
            (off if with_offset else ZERO) + sum((sign * y[k] for k, sign in t), ZERO)
            for off, t in zip(self.offsets, self.terms)
        )


def _standard_form(p: LinearProgram) -> _StandardForm:
    n = p.num_variables
    offsets: List[Fraction] = []
    terms: List[List[Tuple[int, int]]] = []
    bound_rows: List[Tuple[int, Fraction]] = []
    columns = 0
    for j in range(n):
        lo, hi = p.lower[j], p.upper[j]
        if lo is not None:
            offsets.append(lo)
            terms.append([(columns, 1)])
            if hi is not None:
                bound_rows.append((columns, hi - lo))
            columns += 1
        elif hi is not None:
            offsets.append(hi)
            terms.append([(columns, -1)])
            columns += 1
        else:
            offsets.append(ZERO)
            terms.append([(columns, 1), (columns + 1, -1)])
            columns += 2

    rows: List[Tuple[List[Fraction], Relation, Fraction]] = []
    for con in p.constraints:
        row = [ZERO] * columns
        shift = ZERO
        for j, a in enumerate(con.coefficients):
            if a == 0:
                continue
            shift += a * offsets[j]
            for k, sign in terms[j]:
                row[k] += sign * a
        rows.append((row, con.relation, con.rhs - shift))
    for k, bound in bound_rows:
        row = [ZERO] * columns
        row[k] = ONE
        rows.append((row, Relation.LE, bound))

    slacks = sum(1 for _, rel, _ in rows if rel is not Relation.EQ)
    width = columns + slacks
    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    s = columns
    for row, rel, rhs in rows:
        full = row + [ZERO] * slacks
        if rel is Relation.LE:
            full[s] = ONE
            s += 1
        elif rel is Relation.GE:
            full[s] = -ONE
            s += 1
        if rhs < 0:
            full = [-v for v in full]
            rhs = -rhs
        A.append(full)
        b.append(rhs)

    c = [ZERO] * width
    constant = ZERO
    for j, cj in enumerate(p.objective):
        constant += cj * offsets[j]
        for k, sign in terms[j]:
            c[k] += sign * cj
    return _StandardForm(A, b, c, offsets, terms, constant)


# ---------------------------------------------------------------------------
# Tableau simplex
# ---------------------------------------------------------------------------

class _Tableau:
    """Dense tableau for min c·y, A·y = b (b >= 0), y >= 0."""

    def __init__(self, A: List[List[Fraction]], b: List[Fraction]):
        self.rows = [list(row) + [rhs] for row, rhs in zip(A, b)]
        self.basis: List[int] = []
        self.cost: List[Fraction] = []

    def set_cost(self, c: Sequence[Fraction]) -> None:
        """Reduced-cost row for c given the current basis; last entry is -objective."""
        cost = list(c) + [ZERO]
        for i, k in enumerate(self.basis):
            ck = cost[k]
            if ck != 0:
                row = self.rows[i]
                cost = [a - ck * r for a, r in zip(cost, row)]
        self.cost = cost

    def pivot(self, i: int, j: int) -> None:
        """Pivot on (i, j); the cost row is updated along with the constraint rows."""
        row = self.rows[i]
        inv = 1 / row[j]
        row = [v * inv for v in row]
        self.rows[i] = row
        for r in range(len(self.rows)):
            if r != i:
                f = self.rows[r][j]
                if f != 0:
                    self.rows[r] = [a - f * v for a, v in zip(self.rows[r], row)]
        f = self.cost[j]
        if f != 0:
            self.cost = [a - f * v for a, v in zip(self.cost, row)]
        self.basis[i] = j

    def run(self, allowed: int) -> Tuple[str, Optional[int]]:
        """
        Bland's-rule iterations over columns < allowed.

        Returns:
            ("optimal", None) or ("unbounded", entering column)
        """
        iterations = 0
        while True:
            entering = next((j for j in range(allowed) if self.cost[j] < 0), None)
            if entering is None:
                logger.debug(f"Simplex optimal after {iterations} pivots")
                return "optimal", None
            leaving = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best:
                        best, leaving = key, i
            if leaving is None:
                return "unbounded", entering
            self.pivot(leaving, entering)
            iterations += 1

    def point(self, size: int) -> List[Fraction]:
        y = [ZERO] * size
        for i, k in enumerate(self.basis):
            if k < size:
                y[k] = self.rows[i][-1]
        return y

    def ray(self, entering: int, size: int) -> List[Fraction]:
        d = [ZERO] * size
        d[entering] = ONE
        for i, k in enumerate(self.basis):
            if k < size:
                d[k] = -self.rows[i][entering]
        return d


def _solve_standard(
    A: List[List[Fraction]],
    b: List[Fraction],
    c: List[Fraction],
) -> Tuple[LpStatus, Optional[List[Fraction]], Optional[List[Fraction]]]:
    """Phase one with one artificial per row, then phase two on the original costs."""
    m = len(A)
    n = len(c)
    tableau = _Tableau(
        [row + [ONE if r == i else ZERO for r in range(m)] for i, row in enumerate(A)],
        b,
    )
    tableau.basis = [n + i for i in range(m)]
    tableau.set_cost([ZERO] * n + [ONE] * m)
    tableau.run(n + m)
    if -tableau.cost[-1] > 0:
        return LpStatus.INFEASIBLE, None, None

    # Drive zero-level artificials out of the basis; drop rows that are redundant.
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] >= n:
            j = next((j for j in range(n) if tableau.rows[i][j] != 0), None)
            if j is None:
                del tableau.rows[i]
                del tableau.basis[i]
                continue
            tableau.pivot(i, j)
        i += 1
    tableau.rows = [row[:n] + [row[-1]] for row in tableau.rows]

    tableau.set_cost(c)
    outcome, entering = tableau.run(n)
    if outcome == "unbounded":
        return LpStatus.UNBOUNDED, tableau.point(n), tableau.ray(entering, n)
    return LpStatus.OPTIMAL, tableau.point(n), None


def solve_lp(p: LinearProgram, check_unique: bool = False) -> LpSolution:
    """
    Solve a linear program exactly.

    Args:
        p: program to minimize
        check_unique: when optimal, also decide whether the optimum is unique.
            A second LP maximizes the sum of the standard-form coordinates that
            vanish at the returned vertex over the optimal face; since the
            vertex's support columns are independent, that maximum is 0 iff
            the optimum is unique.

    Returns:
        LpSolution with status optimal/infeasible/unbounded

    Raises:
        ValueError: check_unique on a program with a free variable (the
            split x = y+ - y- makes standard-form uniqueness meaningless)
    """
    if check_unique and any(lo is None and hi is None for lo, hi in zip(p.lower, p.upper)):
        raise ValueError("Uniqueness check requires every variable to have a finite bound")
    sf = _standard_form(p)
    status, y, d = _solve_standard(sf.A, sf.b, sf.c)
    if status is LpStatus.INFEASIBLE:
        logger.debug("LP infeasible")
        return LpSolution(LpStatus.INFEASIBLE)
    if status is LpStatus.UNBOUNDED:
        ray = sf.to_original(d, with_offset=False)
        logger.debug(f"LP unbounded along {ray}")
        return LpSolution(LpStatus.UNBOUNDED, ray=ray)

    point = sf.to_original(y)
    objective = p.value(point)
    if not check_unique:
        return LpSolution(LpStatus.OPTIMAL, point=point, objective=objective)

    zero_columns = [k for k, v in enumerate(y) if v == 0]
    face_value = sum((ck * yk for ck, yk in zip(sf.c, y)), ZERO)
    A2 = [list(row) for row in sf.A] + [list(sf.c)]
    b2 = list(sf.b) + [face_value]
    if b2[-1] < 0:
        A2[-1] = [-v for v in A2[-1]]
        b2[-1] = -b2[-1]
    c2 = [ZERO] * len(sf.c)
    for k in zero_columns:
        c2[k] = -ONE
    status2, y2, d2 = _solve_standard(A2, b2, c2)
    if status2 is LpStatus.UNBOUNDED:
        witness_y = [a + b for a, b in zip(y2, d2)]
        return LpSolution(LpStatus.OPTIMAL, point=point, objective=objective,
                          unique=False, witness=sf.to_original(witness_y))
    spread = -sum((c2[k] * y2[k] for k in zero_columns), ZERO)
    if spread > 0:
        return LpSolution(LpStatus.OPTIMAL, point=point, objective=objective,
                          unique=False, witness=sf.to_original(y2))
    return LpSolution(LpStatus.OPTIMAL, point=point, objective=objective, unique=True)
