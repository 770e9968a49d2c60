"""Pseudo-weights of pseudo-codewords and their minima over the fundamental cone.

All functionals take a nonnegative vector ω and are invariant under positive
scaling; every one of them equals the Hamming weight on 0/1 vectors and is
defined as 0 for ω = 0.

Minima over K(H) are taken over the extreme rays of the cone, enumerated with
the double description method. The max-fractional minimum additionally has an
LP path (one LP per coordinate) that works for any block length.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .cone import cone_inequalities
from .errors import GuardExceededError, NegativeEntryError
from .lp import LinearProgram, solve_lp
from .matrices import (
    BinaryMatrix, Number, RealVector, l1_norm, l2_squared, linf_norm, rref, real_vector, support
)
from .reporting import format_rational, rational_field

logger = logging.getLogger(__name__)

DEFAULT_MAX_RAY_COLUMNS = 12


class PseudoWeightKind(str, Enum):
    AWGNC = "awgnc"
    BSC = "bsc"
    BSC_PRIME = "bsc_prime"
    BEC = "bec"
    MAXFRAC = "maxfrac"


def _nonnegative(omega: Sequence[Number]) -> RealVector:
    w = real_vector(omega)
    for i, v in enumerate(w):
        if v < 0:
            raise NegativeEntryError(f"Entry {i} of {list(map(str, w))} is negative")
    return w


def awgnc_pw(omega: Sequence[Number]) -> Fraction:
    """‖ω‖₁² / ‖ω‖₂²."""
    w = _nonnegative(omega)
    energy = l2_squared(w)
    if energy == 0:
        return Fraction(0)
    return l1_norm(w) ** 2 / energy


def bsc_pw(omega: Sequence[Number]) -> Fraction:
    """
    2·F⁻¹(‖ω‖₁/2) for the piecewise-linear F with slopes ω′_i on (i-1, i].

    ω′ is ω sorted in decreasing order. F⁻¹ is resolved exactly: find the
    first breakpoint i with F(i) >= ‖ω‖₁/2 and interpolate on its segment.
    """
    w = sorted(_nonnegative(omega), reverse=True)
    half = sum(w, Fraction(0)) / 2
    if half == 0:
        return Fraction(0)
    reached = Fraction(0)
    for i, slope in enumerate(w):
        if reached + slope >= half:
            return 2 * (i + (half - reached) / slope)
        reached += slope
    raise AssertionError("F never reaches half the total mass")


def bsc_prime_pw(omega: Sequence[Number]) -> int:
    """
    2e on equality, 2e-1 otherwise, for the smallest e with
    ‖ω′_{1..e}‖₁ >= ‖ω′_{e+1..n}‖₁.
    """
    w = sorted(_nonnegative(omega), reverse=True)
    total = sum(w, Fraction(0))
    head = Fraction(0)
    for e in range(len(w) + 1):
        if e:
            head += w[e - 1]
        tail = total - head
        if head >= tail:
            return 2 * e if head == tail else 2 * e - 1
    raise AssertionError("unreachable: the full prefix always dominates")


def bec_pw(omega: Sequence[Number]) -> int:
    """|supp(ω)|."""
    return len(support(_nonnegative(omega)))


def maxfrac_weight(omega: Sequence[Number]) -> Fraction:
    """‖ω‖₁ / ‖ω‖∞."""
    w = _nonnegative(omega)
    peak = linf_norm(w)
    if peak == 0:
        return Fraction(0)
    return l1_norm(w) / peak


PSEUDOWEIGHTS: Dict[PseudoWeightKind, Callable[[Sequence[Number]], Number]] = {
    PseudoWeightKind.AWGNC: awgnc_pw,
    PseudoWeightKind.BSC: bsc_pw,
    PseudoWeightKind.BSC_PRIME: bsc_prime_pw,
    PseudoWeightKind.BEC: bec_pw,
    PseudoWeightKind.MAXFRAC: maxfrac_weight,
}


@dataclass(frozen=True)
class PseudoWeightReport:
    """All five pseudo-weights of one vector."""
    awgnc: Fraction
    bsc: Fraction
    bsc_prime: int
    bec: int
    maxfrac: Fraction

    def to_dict(self) -> Dict[str, Dict]:
        return {
            "awgnc": rational_field(self.awgnc),
            "bsc": rational_field(self.bsc),
            "bsc_prime": rational_field(Fraction(self.bsc_prime)),
            "bec": rational_field(Fraction(self.bec)),
            "maxfrac": rational_field(self.maxfrac),
        }


def pseudoweight_report(omega: Sequence[Number]) -> PseudoWeightReport:
    w = _nonnegative(omega)
    return PseudoWeightReport(
        awgnc=awgnc_pw(w),
        bsc=bsc_pw(w),
        bsc_prime=bsc_prime_pw(w),
        bec=bec_pw(w),
        maxfrac=maxfrac_weight(w),
    )


def bsc_halfweight_check(omega: Sequence[Number], kind: PseudoWeightKind = PseudoWeightKind.BSC) -> bool:
    """
    Strict balancedness ‖ω_S‖₁ < ‖ω_S̄‖₁ for every |S| < w/2, w the BSC or BSC′ pseudo-weight.

    Only the worst case per size is tested: S = the |S| largest entries.
    """
    w = sorted(_nonnegative(omega), reverse=True)
    total = sum(w, Fraction(0))
    if total == 0:
        return True
    weight = Fraction(PSEUDOWEIGHTS[kind](w))
    head = Fraction(0)
    size = 0
    while size < weight / 2:
        if not head < total - head:
            return False
        if size == len(w):
            break
        head += w[size]
        size += 1
    return True


# ---------------------------------------------------------------------------
# Extreme rays of K(H)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremeRay:
    """An edge of K(H): generator normalized to first nonzero entry 1, plus its tight inequalities."""
    generator: RealVector
    tight: Tuple[int, ...]


def _normalize(v: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in v) if g else tuple(v)


def enumerate_extreme_rays(
    H: BinaryMatrix,
    max_columns: int = DEFAULT_MAX_RAY_COLUMNS
) -> List[ExtremeRay]:
    """
    Extreme rays of K(H) by the double description method.

    Starts from the nonnegative orthant (rays e_1..e_n) and intersects one
    check inequality at a time. Rays on the violating side are dropped and
    every adjacent (violating, satisfying) pair contributes the positive
    combination lying on the new hyperplane. Adjacency is decided by the
    combinatorial test: no third ray is tight on all constraints common to
    the pair.

    Raises:
        GuardExceededError: if n exceeds max_columns
    """
    n = H.n
    if n > max_columns:
        raise GuardExceededError(f"{n} columns exceed the ray enumeration guard {max_columns}")
    system = cone_inequalities(H)
    inequalities = [q.coefficients for q in system.inequalities]

    # Rays as (integer generator, frozenset of tight inequality indices among those processed).
    rays: List[Tuple[Tuple[int, ...], frozenset]] = []
    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n))
        rays.append((e, frozenset(k for k in range(n) if k != i)))

    for index in range(n, len(inequalities)):
        a = inequalities[index]
        values = [sum(x * y for x, y in zip(a, r)) for r, _ in rays]
        positive = [k for k, v in enumerate(values) if v > 0]
        negative = [k for k, v in enumerate(values) if v < 0]
        zero = [k for k, v in enumerate(values) if v == 0]

        kept = [(rays[k][0], rays[k][1] | {index}) for k in zero]
        kept += [rays[k] for k in negative]
        for p in positive:
            rp, zp = rays[p]
            for q in negative:
                rq, zq = rays[q]
                common = zp & zq
                if len(common) < n - 2:
                    continue
                if any(k not in (p, q) and common <= rays[k][1] for k in range(len(rays))):
                    continue
                combined = _normalize(tuple(
                    values[p] * y - values[q] * x for x, y in zip(rp, rq)
                ))
                kept.append((combined, common | {index}))
        rays = kept
        logger.debug(f"Inequality {index}: {len(rays)} rays")

    unique: Dict[Tuple[int, ...], None] = {}
    for r, _ in rays:
        if any(r):
            unique[_normalize(r)] = None

    result = []
    for r in sorted(unique, reverse=True):
        first = next(x for x in r if x)
        generator = tuple(Fraction(x, first) for x in r)
        tight = tuple(
            k for k, a in enumerate(inequalities) if sum(x * y for x, y in zip(a, r)) == 0
        )
        result.append(ExtremeRay(generator, tight))
    logger.debug(f"{len(result)} extreme rays for {H.m}x{n} matrix")
    return result


def tight_rank(H: BinaryMatrix, ray: ExtremeRay) -> int:
    """Rank of the inequalities tight at the ray; n - 1 for an edge of the cone."""
    system = cone_inequalities(H)
    return len(rref([system.inequalities[k].coefficients for k in ray.tight])[1])


# ---------------------------------------------------------------------------
# Minimum pseudo-weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PseudoWeightMinimum:
    """Minimum of a pseudo-weight over K(H)∖{0}; value None means the cone is trivial."""
    kind: PseudoWeightKind
    value: Optional[Fraction]
    minimizer: Optional[RealVector] = None

    @property
    def cone_trivial(self) -> bool:
        return self.value is None

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind.value,
            "cone_trivial": self.cone_trivial,
            "value": rational_field(self.value),
            "minimizer": None if self.minimizer is None else [format_rational(v) for v in self.minimizer],
        }


def cone_is_trivial(H: BinaryMatrix) -> bool:
    """K(H) = {0} iff max Σω over K(H) ∩ [0,1]^n is zero."""
    system = cone_inequalities(H)
    program = LinearProgram(
        objective=tuple(Fraction(-1) for _ in range(H.n)),
        constraints=tuple(system.check_constraints()),
        lower=tuple(Fraction(0) for _ in range(H.n)),
        upper=tuple(Fraction(1) for _ in range(H.n)),
    )
    return solve_lp(program).objective == 0


def min_pseudoweight(
    H: BinaryMatrix,
    kind: PseudoWeightKind,
    max_columns: int = DEFAULT_MAX_RAY_COLUMNS,
    workers: int = 1
) -> PseudoWeightMinimum:
    """
    Minimum of a pseudo-weight over K(H)∖{0}, taken over the extreme rays.

    Each functional is scale invariant and quasi-concave on the cone (or, for
    the BEC weight, monotone in the support), so the minimum is attained on an
    edge. MAXFRAC beyond the ray guard falls back to the LP path.

    Raises:
        GuardExceededError: n above the ray guard for a non-MAXFRAC kind
    """
    kind = PseudoWeightKind(kind)
    if kind is PseudoWeightKind.MAXFRAC and H.n > max_columns:
        return min_maxfrac_weight_lp(H, workers=workers)
    rays = enumerate_extreme_rays(H, max_columns)
    if not rays:
        logger.info("Fundamental cone is trivial; no minimum pseudo-weight")
        return PseudoWeightMinimum(kind, None)
    functional = PSEUDOWEIGHTS[kind]
    best = min(rays, key=lambda r: Fraction(functional(r.generator)))
    return PseudoWeightMinimum(kind, Fraction(functional(best.generator)), best.generator)


def _maxfrac_slice(entries: Tuple[Tuple[int, ...], ...], i: int) -> Optional[Tuple[Fraction, RealVector]]:
    """min Σω over ω ∈ K(H), ω_i = 1, ω <= 1; None when infeasible."""
    H = BinaryMatrix(entries)
    system = cone_inequalities(H)
    program = LinearProgram(
        objective=tuple(Fraction(1) for _ in range(H.n)),
        constraints=tuple(system.check_constraints()),
        lower=tuple(Fraction(1) if k == i else Fraction(0) for k in range(H.n)),
        upper=tuple(Fraction(1) for _ in range(H.n)),
    )
    solution = solve_lp(program)
    if not solution.is_optimal:
        return None
    return solution.objective, solution.point


def min_maxfrac_weight_lp(H: BinaryMatrix, workers: int = 1) -> PseudoWeightMinimum:
    """
    min over ω ∈ K(H)∖{0} of ‖ω‖₁/‖ω‖∞ through n LPs, one per coordinate
    playing the role of the largest entry.

    The per-coordinate LPs are independent and fan out over `workers`
    processes; the result does not depend on completion order.
    """
    if workers > 1:
        slices = Parallel(n_jobs=workers)(
            delayed(_maxfrac_slice)(H.entries, i) for i in range(H.n)
        )
    else:
        slices = [_maxfrac_slice(H.entries, i) for i in range(H.n)]
    feasible = [s for s in slices if s is not None]
    if not feasible:
        return PseudoWeightMinimum(PseudoWeightKind.MAXFRAC, None)
    value, point = min(feasible, key=lambda s: s[0])
    return PseudoWeightMinimum(PseudoWeightKind.MAXFRAC, value, point)
