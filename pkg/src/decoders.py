"""Sparse-recovery and channel-coding decoders.

- cs_lpd: ℓ1 minimization subject to H·e = s (basis pursuit) as an LP
- cs_opt: brute-force ℓ0 minimization over supports (oracle)
- cc_lpd: LP decoding over the fundamental polytope
- cc_mld / cc_mld_hull: maximum-likelihood decoding by codeword enumeration,
  and its convex-hull LP form
- bec_peel / cs_backsub: peeling over GF(2) and back-substitution over the
  rationals, each with its own resolution loop

Ties and fractional optima are reported as such and count as failures in
every success statistic.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .cone import DEFAULT_MAX_ROW_WEIGHT, cone_inequalities, polytope_inequalities
from .errors import (
    DimensionError, GuardExceededError, InconsistentObservationError, NoSolutionWithinK
)
from .lp import Constraint, LinearProgram, LpStatus, Relation, solve_lp
from .matrices import (
    DEFAULT_MAX_CODE_DIMENSION, BinaryMatrix, BitVector, Number, RealVector, SupportSet,
    enumerate_codewords, gf2_solvable, real_vector, rref
)
from .reporting import format_rational

logger = logging.getLogger(__name__)

LlrVector = RealVector

DEFAULT_CS_OPT_MAX_COLUMNS = 20
DEFAULT_CS_OPT_MAX_K = 4


class DecodeStatus(str, Enum):
    SUCCESS = "success"
    FRACTIONAL = "fractional"
    TIE = "tie"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class DecodeResult:
    """
    Decoder output.

    SUCCESS means a unique optimum (integral, for cc_lpd). TIE carries a
    different optimal point in `witness`.
    """
    status: DecodeStatus
    estimate: Optional[Tuple[Number, ...]]
    objective: Optional[Fraction]
    witness: Optional[Tuple[Number, ...]] = None

    @property
    def success(self) -> bool:
        return self.status is DecodeStatus.SUCCESS

    def to_dict(self) -> Dict:
        payload = {
            "status": self.status.value,
            "estimate": None if self.estimate is None else [format_rational(v) for v in self.estimate],
            "objective": None if self.objective is None else format_rational(self.objective),
        }
        if self.witness is not None:
            payload["witness"] = [format_rational(v) for v in self.witness]
        return payload


def _check_length(values: Sequence, expected: int, what: str) -> None:
    if len(values) != expected:
        raise DimensionError(f"{what} has length {len(values)}, expected {expected}")


def _dot(a: Sequence[Fraction], b: Sequence[Number]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


# ---------------------------------------------------------------------------
# Compressed sensing
# ---------------------------------------------------------------------------

def cs_lpd(H: BinaryMatrix, s: Sequence[Number]) -> DecodeResult:
    """
    min ‖e′‖₁ subject to H·e′ = s, via e′ = u - v with u, v >= 0.

    At any optimum u_i·v_i = 0, so uniqueness in (u, v) and in e′ coincide.
    """
    _check_length(s, H.m, "Syndrome")
    target = real_vector(s)
    n = H.n
    constraints = []
    for j, check in enumerate(H.row_supports):
        row = [Fraction(0)] * (2 * n)
        for i in check:
            row[i] = Fraction(1)
            row[n + i] = Fraction(-1)
        constraints.append(Constraint(tuple(row), Relation.EQ, target[j]))
    program = LinearProgram(
        objective=tuple(Fraction(1) for _ in range(2 * n)),
        constraints=tuple(constraints),
        lower=tuple(Fraction(0) for _ in range(2 * n)),
        upper=tuple(None for _ in range(2 * n)),
    )
    solution = solve_lp(program, check_unique=True)
    if solution.status is LpStatus.INFEASIBLE:
        logger.debug("Syndrome not in the range of H")
        return DecodeResult(DecodeStatus.INFEASIBLE, None, None)

    def split(point):
        return tuple(point[i] - point[n + i] for i in range(n))

    estimate = split(solution.point)
    if not solution.unique:
        return DecodeResult(DecodeStatus.TIE, estimate, solution.objective, split(solution.witness))
    return DecodeResult(DecodeStatus.SUCCESS, estimate, solution.objective)


def _solve_on_support(H: BinaryMatrix, columns: Tuple[int, ...], s: RealVector) -> Optional[RealVector]:
    """Unique solution of H_S·e_S = s with every entry nonzero, or None."""
    sub = H.column_submatrix(columns)
    augmented = [list(row) + [rhs] for row, rhs in zip(sub, s)]
    reduced, pivots = rref(augmented)
    if len(columns) in pivots or len(pivots) != len(columns):
        return None
    values = [Fraction(0)] * len(columns)
    for row, p in zip(reduced, pivots):
        values[p] = row[-1]
    if any(v == 0 for v in values):
        return None
    estimate = [Fraction(0)] * H.n
    for i, v in zip(columns, values):
        estimate[i] = v
    return tuple(estimate)


def cs_opt(
    H: BinaryMatrix,
    s: Sequence[Number],
    k_max: int,
    max_columns: int = DEFAULT_CS_OPT_MAX_COLUMNS,
    max_k: int = DEFAULT_CS_OPT_MAX_K
) -> DecodeResult:
    """
    Sparsest e with H·e = s by enumerating supports of size 0, 1, ..., k_max.

    At the minimal size every consistent support has independent columns and
    a unique, fully supported solution. The lexicographically smallest
    support wins; a second consistent support makes the result a TIE. The
    objective is the sparsity k.

    Raises:
        GuardExceededError: n > max_columns or k_max > max_k
        NoSolutionWithinK: no support of size <= k_max is consistent
    """
    _check_length(s, H.m, "Syndrome")
    if H.n > max_columns or k_max > max_k:
        raise GuardExceededError(
            f"cs_opt enumeration guard: n={H.n} (max {max_columns}), k_max={k_max} (max {max_k})"
        )
    target = real_vector(s)
    if not any(target):
        return DecodeResult(DecodeStatus.SUCCESS, tuple(Fraction(0) for _ in range(H.n)), Fraction(0))
    for k in range(1, k_max + 1):
        found: List[RealVector] = []
        for columns in itertools.combinations(range(H.n), k):
            estimate = _solve_on_support(H, columns, target)
            if estimate is not None:
                found.append(estimate)
                if len(found) == 2:
                    break
        if found:
            if len(found) > 1:
                return DecodeResult(DecodeStatus.TIE, found[0], Fraction(k), found[1])
            return DecodeResult(DecodeStatus.SUCCESS, found[0], Fraction(k))
    raise NoSolutionWithinK(f"No solution with at most {k_max} nonzero entries")


# ---------------------------------------------------------------------------
# Channel coding
# ---------------------------------------------------------------------------

def cc_lpd(
    H: BinaryMatrix,
    llr: Sequence[Number],
    max_row_weight: int = DEFAULT_MAX_ROW_WEIGHT
) -> DecodeResult:
    """
    min ⟨λ, x⟩ over the fundamental polytope P(H).

    SUCCESS iff the optimum is unique and integral (then it is a codeword).
    """
    _check_length(llr, H.n, "LLR vector")
    costs = real_vector(llr)
    system = polytope_inequalities(H, max_row_weight)
    program = LinearProgram(
        objective=costs,
        constraints=tuple(system.check_constraints()),
        lower=tuple(Fraction(0) for _ in range(H.n)),
        upper=tuple(Fraction(1) for _ in range(H.n)),
    )
    solution = solve_lp(program, check_unique=True)
    if not solution.unique:
        return DecodeResult(DecodeStatus.TIE, solution.point, solution.objective, solution.witness)
    if any(v.denominator != 1 for v in solution.point):
        return DecodeResult(DecodeStatus.FRACTIONAL, solution.point, solution.objective)
    return DecodeResult(DecodeStatus.SUCCESS, solution.point, solution.objective)


def cc_mld(
    H: BinaryMatrix,
    llr: Sequence[Number],
    max_dimension: int = DEFAULT_MAX_CODE_DIMENSION
) -> DecodeResult:
    """Exhaustive min ⟨λ, x⟩ over the code; TIE when two codewords share the minimum."""
    _check_length(llr, H.n, "LLR vector")
    costs = real_vector(llr)
    ranked = sorted(
        ((_dot(costs, x), x) for x in enumerate_codewords(H, max_dimension)),
        key=lambda item: item[0]
    )
    best_cost, best = ranked[0]
    if len(ranked) > 1 and ranked[1][0] == best_cost:
        return DecodeResult(DecodeStatus.TIE, best, best_cost, ranked[1][1])
    return DecodeResult(DecodeStatus.SUCCESS, best, best_cost)


def cc_mld_hull(
    H: BinaryMatrix,
    llr: Sequence[Number],
    max_dimension: int = DEFAULT_MAX_CODE_DIMENSION
) -> DecodeResult:
    """
    min ⟨λ, x⟩ over conv(C) as an LP over convex-combination weights of the codewords.

    The optimal face in weight space is the simplex over the minimum-cost
    codewords, so uniqueness matches cc_mld's tie semantics.
    """
    _check_length(llr, H.n, "LLR vector")
    costs = real_vector(llr)
    codewords = enumerate_codewords(H, max_dimension)
    program = LinearProgram(
        objective=tuple(_dot(costs, x) for x in codewords),
        constraints=(Constraint(tuple(Fraction(1) for _ in codewords), Relation.EQ, Fraction(1)),),
        lower=tuple(Fraction(0) for _ in codewords),
        upper=tuple(None for _ in codewords),
    )
    solution = solve_lp(program, check_unique=True)

    def combine(weights):
        return tuple(
            sum((t * x[i] for t, x in zip(weights, codewords)), Fraction(0)) for i in range(H.n)
        )

    estimate = combine(solution.point)
    if not solution.unique:
        return DecodeResult(DecodeStatus.TIE, estimate, solution.objective, combine(solution.witness))
    return DecodeResult(DecodeStatus.SUCCESS, estimate, solution.objective)


@dataclass(frozen=True)
class ZeroCodewordCertificate:
    """
    Whether CC-LPD decodes to the all-zero codeword for a cost vector.

    `minimum` is min ⟨λ, ω⟩ over ω ∈ K(H), Σω = 1 (None for a trivial cone);
    `witness` is the minimizing pseudo-codeword.
    """
    decodes_to_zero: bool
    minimum: Optional[Fraction]
    witness: Optional[RealVector] = None


def zero_codeword_certificate(H: BinaryMatrix, llr: Sequence[Number]) -> ZeroCodewordCertificate:
    """
    Decide through the fundamental cone whether 0 is the unique CC-LPD optimum.

    K(H) is the conic hull of P(H) at the origin, so 0 is the unique
    minimizer over P(H) iff ⟨λ, ω⟩ > 0 for every nonzero ω ∈ K(H).
    """
    _check_length(llr, H.n, "LLR vector")
    costs = real_vector(llr)
    system = cone_inequalities(H)
    constraints = system.check_constraints() + [
        Constraint(tuple(Fraction(1) for _ in range(H.n)), Relation.EQ, Fraction(1))
    ]
    program = LinearProgram(
        objective=costs,
        constraints=tuple(constraints),
        lower=tuple(Fraction(0) for _ in range(H.n)),
        upper=tuple(None for _ in range(H.n)),
    )
    solution = solve_lp(program)
    if solution.status is LpStatus.INFEASIBLE:
        return ZeroCodewordCertificate(True, None)
    return ZeroCodewordCertificate(solution.objective > 0, solution.objective, solution.point)


# ---------------------------------------------------------------------------
# Peeling and back-substitution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StuckReport:
    """Peeling stalled: `residual` is the stopping set, `partial` the values known so far (None = unknown)."""
    residual: SupportSet
    partial: Tuple[Optional[Number], ...]


def bec_peel(H: BinaryMatrix, observed: Sequence[Optional[int]]) -> Union[BitVector, StuckReport]:
    """
    Peeling decoder for erasures: `observed` holds bits, or None for an erasure.

    Checks with a single erased neighbour are queued; resolving a bit by
    parity over the known bits of its check may release further checks.
    What remains when the queue runs dry is the largest stopping set inside
    the erasure set.

    Raises:
        InconsistentObservationError: the observed bits extend to no codeword
    """
    _check_length(observed, H.n, "Observation")
    erased = {i for i, v in enumerate(observed) if v is None}
    known_bits = [0 if v is None else int(v) for v in observed]
    erased_cols = sorted(erased)
    lhs = [[row[i] for i in erased_cols] for row in H.entries]
    rhs = [sum(known_bits[i] for i in check if i not in erased) % 2 for check in H.row_supports]
    if not gf2_solvable(lhs, rhs):
        raise InconsistentObservationError("Observed bits are not consistent with any codeword")

    values: List[Optional[int]] = [None if v is None else int(v) for v in observed]
    open_count = [sum(1 for i in check if values[i] is None) for check in H.row_supports]
    ready = deque(j for j, count in enumerate(open_count) if count == 1)
    while ready:
        j = ready.popleft()
        if open_count[j] != 1:
            continue
        check = H.row_supports[j]
        i = next(k for k in check if values[k] is None)
        values[i] = sum(values[k] for k in check if k != i) % 2
        for touched in H.col_supports[i]:
            open_count[touched] -= 1
            if open_count[touched] == 1:
                ready.append(touched)

    for j, check in enumerate(H.row_supports):
        if all(values[k] is not None for k in check) and sum(values[k] for k in check) % 2:
            raise InconsistentObservationError(f"Check {j + 1} has odd parity")
    residual = [i for i, v in enumerate(values) if v is None]
    if residual:
        logger.debug(f"Peeling stuck on stopping set {residual}")
        return StuckReport(SupportSet.of(residual, H.n), tuple(values))
    return tuple(values)


def cs_backsub(
    H: BinaryMatrix,
    s: Sequence[Number],
    support_set: SupportSet
) -> Union[RealVector, StuckReport]:
    """
    Recover the values on a known support by back-substitution over the rationals.

    Coordinates outside the support are zero. Each pass takes every row of
    H·ν = s with exactly one unknown and solves it for that unknown; passes
    repeat until one makes no progress.

    Raises:
        InconsistentObservationError: a fully resolved row contradicts s
    """
    _check_length(s, H.m, "Syndrome")
    target = real_vector(s)
    values: List[Optional[Fraction]] = [
        None if i in support_set else Fraction(0) for i in range(H.n)
    ]
    progress = True
    while progress:
        progress = False
        for j, check in enumerate(H.row_supports):
            unknown = [i for i in check if values[i] is None]
            if len(unknown) != 1:
                continue
            i = unknown[0]
            values[i] = target[j] - sum((values[k] for k in check if k != i), Fraction(0))
            progress = True

    for j, check in enumerate(H.row_supports):
        if all(values[k] is not None for k in check):
            if sum((values[k] for k in check), Fraction(0)) != target[j]:
                raise InconsistentObservationError(f"Row {j + 1} contradicts the syndrome")
    residual = [i for i, v in enumerate(values) if v is None]
    if residual:
        return StuckReport(SupportSet.of(residual, H.n), tuple(values))
    return tuple(values)
