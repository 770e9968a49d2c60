"""Fundamental cone K(H) and fundamental polytope P(H) as inequality systems.

Both systems are stored in the uniform form a·v <= rhs. Inequalities of kind
"bound" (nonnegativity, box) are separated from the per-check inequalities
so that LP builders can pass the former as variable bounds.

Membership is exact over the rationals. `cone_contains_float` exists only for
reporting on float vectors coming out of channel simulations.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, GuardExceededError
from .lp import Constraint, Relation
from .matrices import BinaryMatrix, Number, real_vector, syndrome_gf2

logger = logging.getLogger(__name__)

DEFAULT_MAX_ROW_WEIGHT = 16


@dataclass(frozen=True)
class Inequality:
    """a·v <= rhs, with a readable label using 1-based coordinates."""
    coefficients: Tuple[int, ...]
    rhs: int
    kind: str
    label: str

    def lhs(self, v: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coefficients, v) if a), Fraction(0))

    def holds(self, v: Sequence[Fraction]) -> bool:
        return self.lhs(v) <= self.rhs

    def as_constraint(self) -> Constraint:
        return Constraint(
            tuple(Fraction(a) for a in self.coefficients), Relation.LE, Fraction(self.rhs)
        )


@dataclass(frozen=True)
class Membership:
    member: bool
    violated: Optional[Inequality] = None

    def __bool__(self) -> bool:
        return self.member


@dataclass(frozen=True)
class FundamentalConeSystem:
    """K(H): ω_i >= 0 for all i, and ω_i <= Σ_{i' ∈ I_j \\ i} ω_i' for every check j and i ∈ I_j."""
    matrix: BinaryMatrix
    inequalities: Tuple[Inequality, ...]

    def check_constraints(self) -> List[Constraint]:
        return [q.as_constraint() for q in self.inequalities if q.kind == "check"]


@dataclass(frozen=True)
class FundamentalPolytopeSystem:
    """P(H): box 0 <= x_i <= 1 plus the odd-subset inequalities of every check."""
    matrix: BinaryMatrix
    inequalities: Tuple[Inequality, ...]

    def check_constraints(self) -> List[Constraint]:
        return [q.as_constraint() for q in self.inequalities if q.kind == "check"]


def _require_length(H: BinaryMatrix, v: Sequence) -> None:
    if len(v) != H.n:
        raise DimensionError(f"Vector length {len(v)} does not match {H.n} columns")


def _unit(n: int, i: int, value: int) -> Tuple[int, ...]:
    return tuple(value if k == i else 0 for k in range(n))


def cone_inequalities(H: BinaryMatrix) -> FundamentalConeSystem:
    """The inequality description of the fundamental cone K(H)."""
    n = H.n
    rows: List[Inequality] = [
        Inequality(_unit(n, i, -1), 0, "bound", f"w{i + 1} >= 0") for i in range(n)
    ]
    for j, check in enumerate(H.row_supports):
        for i in check:
            coefficients = [0] * n
            for k in check:
                coefficients[k] = 1 if k == i else -1
            others = " + ".join(f"w{k + 1}" for k in check if k != i) or "0"
            rows.append(Inequality(tuple(coefficients), 0, "check", f"check {j + 1}: w{i + 1} <= {others}"))
    return FundamentalConeSystem(H, tuple(rows))


def cone_contains(H: BinaryMatrix, omega: Sequence[Number]) -> Membership:
    """
    Exact membership of ω in K(H).

    Returns:
        Membership verdict with the first violated inequality, if any
    """
    _require_length(H, omega)
    w = real_vector(omega)
    for q in cone_inequalities(H).inequalities:
        if not q.holds(w):
            return Membership(False, q)
    return Membership(True)


def cone_contains_float(H: BinaryMatrix, omega: Sequence[float], tol: float = 1e-9) -> bool:
    """Tolerant membership for float vectors, for reporting only."""
    _require_length(H, omega)
    system = cone_inequalities(H)
    A = np.array([q.coefficients for q in system.inequalities], dtype=float)
    b = np.array([q.rhs for q in system.inequalities], dtype=float)
    return bool(np.all(A @ np.asarray(omega, dtype=float) <= b + tol))


def polytope_inequalities(
    H: BinaryMatrix,
    max_row_weight: int = DEFAULT_MAX_ROW_WEIGHT
) -> FundamentalPolytopeSystem:
    """
    Forbidden-set description of P(H).

    For each check j and each odd-size V ⊆ I_j:
    Σ_{i∈V} x_i - Σ_{i∈I_j\\V} x_i <= |V| - 1, i.e. 2^(|I_j|-1) inequalities per check.

    Raises:
        GuardExceededError: if a row weight exceeds max_row_weight
    """
    if H.max_row_weight > max_row_weight:
        raise GuardExceededError(
            f"Row weight {H.max_row_weight} exceeds polytope guard {max_row_weight}"
        )
    n = H.n
    rows: List[Inequality] = []
    for i in range(n):
        rows.append(Inequality(_unit(n, i, -1), 0, "bound", f"x{i + 1} >= 0"))
        rows.append(Inequality(_unit(n, i, 1), 1, "bound", f"x{i + 1} <= 1"))
    for j, check in enumerate(H.row_supports):
        for size in range(1, len(check) + 1, 2):
            for V in itertools.combinations(check, size):
                coefficients = [0] * n
                for k in check:
                    coefficients[k] = 1 if k in V else -1
                label = f"check {j + 1}: odd set {{{', '.join(str(k + 1) for k in V)}}}"
                rows.append(Inequality(tuple(coefficients), size - 1, "check", label))
    logger.debug(f"Fundamental polytope system with {len(rows)} inequalities")
    return FundamentalPolytopeSystem(H, tuple(rows))


def polytope_contains(
    H: BinaryMatrix,
    x: Sequence[Number],
    max_row_weight: int = DEFAULT_MAX_ROW_WEIGHT
) -> Membership:
    """Exact membership of x in P(H)."""
    _require_length(H, x)
    v = real_vector(x)
    for q in polytope_inequalities(H, max_row_weight).inequalities:
        if not q.holds(v):
            return Membership(False, q)
    return Membership(True)


def is_unscaled_pseudocodeword(H: BinaryMatrix, omega: Sequence[Number]) -> bool:
    """True iff ω ∈ K(H), every entry is an integer, and ω mod 2 is a codeword."""
    w = real_vector(omega)
    if not cone_contains(H, w):
        return False
    if any(v.denominator != 1 for v in w):
        return False
    return not any(syndrome_gf2(H, [int(v) % 2 for v in w]))


def format_system(system) -> str:
    """Plain-text polyhedron: one inequality per line as 'coefficients <= rhs'."""
    lines = [f"# {system.matrix.m}x{system.matrix.n} {len(system.inequalities)} inequalities"]
    for q in system.inequalities:
        lines.append(" ".join(str(a) for a in q.coefficients) + f" <= {q.rhs}")
    return "\n".join(lines) + "\n"
