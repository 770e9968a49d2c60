"""Nullspace-property certification, the nullspace-to-cone bridge, and guarantee bounds.

H has NSP≤(S, C) when C·‖ν_S‖₁ <= ‖ν_S̄‖₁ for every ν in the real nullspace
of H, and NSP<(S, C) when the inequality is strict for every ν ≠ 0.
NSP(k, C) asks for it on every |S| <= k.

check_nsp_support decides a single support exactly with one LP per sign
pattern σ ∈ {±1}^S (first sign fixed, since ν and -ν are both in the
nullspace):

    maximize C·Σ_{i∈S} σ_i ν_i  s.t.  H·ν = 0,  ‖ν_S̄‖₁ <= 1

with ‖ν_S̄‖₁ linearized through magnitude variables t_i >= |ν_i|. The
maximum over σ equals max C‖ν_S‖₁ on the slice ‖ν_S̄‖₁ <= 1, so:
unbounded → fails (a nullspace vector vanishing off S); maximum > 1 →
fails; = 1 → fails only in the strict variant; otherwise holds.

check_nsp_k only needs supports of size exactly k: shrinking S lowers the
left side and raises the right side of the inequality.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .cone import Membership, cone_contains
from .errors import (
    GuardExceededError, HypothesisError, NegativeEntryError, NotInNullspaceError, SoundnessViolation
)
from .lp import Constraint, LinearProgram, LpStatus, Relation, solve_lp
from .matrices import (
    BinaryMatrix, Number, RealVector, SupportSet, abs_vector, l1_norm, matvec, real_nullspace_basis,
    real_rank, real_vector, restrict, rref, support
)
from .pseudoweight import (
    DEFAULT_MAX_RAY_COLUMNS, PseudoWeightKind, PseudoWeightMinimum, min_maxfrac_weight_lp,
    min_pseudoweight
)
from .reporting import format_rational, rational_field

logger = logging.getLogger(__name__)

DEFAULT_MAX_NSP_LPS = 20000


class NspVerdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"


@dataclass(frozen=True)
class NspQuery:
    """A single-support query (support set) or an all-supports query (k)."""
    matrix: BinaryMatrix
    C: Fraction
    strict: bool
    support: Optional[SupportSet] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.C < 0:
            raise ValueError(f"C must be nonnegative, got {self.C}")
        if (self.support is None) == (self.k is None):
            raise ValueError("Exactly one of support and k must be given")
        if self.k is not None and not 0 <= self.k <= self.matrix.n:
            raise ValueError(f"k={self.k} out of range 0..{self.matrix.n}")

    @property
    def label(self) -> str:
        relation = "<" if self.strict else "<="
        target = f"S={list(self.support.indices)}" if self.support is not None else f"k={self.k}"
        return f"NSP{relation}({target}, C={format_rational(self.C)})"


@dataclass(frozen=True)
class NspReport:
    """Verdict; on failure, a nullspace vector ν violating C·‖ν_S‖₁ (<|<=) ‖ν_S̄‖₁ on support S."""
    query: NspQuery
    verdict: NspVerdict
    certificate: Optional[RealVector] = None
    support: Optional[SupportSet] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None
    lps_solved: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict is NspVerdict.HOLDS

    def to_dict(self) -> Dict:
        payload = {
            "query": self.query.label,
            "verdict": self.verdict.value,
            "lps_solved": self.lps_solved,
        }
        if self.certificate is not None:
            payload.update({
                "certificate": [format_rational(v) for v in self.certificate],
                "support": list(self.support.indices),
                "left": rational_field(self.left),
                "right": rational_field(self.right),
            })
        return payload


def nsp_sides(nu: Sequence[Fraction], S: SupportSet, C: Fraction) -> Tuple[Fraction, Fraction]:
    """(C·‖ν_S‖₁, ‖ν_S̄‖₁)."""
    return C * l1_norm(restrict(nu, S)), l1_norm(restrict(nu, S.complement()))


def violates(nu: Sequence[Fraction], S: SupportSet, C: Fraction, strict: bool) -> bool:
    """Whether ν is a counterexample to the queried inequality."""
    if not any(nu):
        return False
    left, right = nsp_sides(nu, S, C)
    return left >= right if strict else left > right


def _fails(query: NspQuery, S: SupportSet, nu: RealVector, lps: int) -> NspReport:
    left, right = nsp_sides(nu, S, query.C)
    return NspReport(query, NspVerdict.FAILS, nu, S, left, right, lps)


def _support_lp(H: BinaryMatrix, S: SupportSet, C: Fraction, signs: Sequence[int]) -> LinearProgram:
    """Variables: ν (free, n) followed by t_i >= |ν_i| for i ∈ S̄."""
    n = H.n
    outside = S.complement().indices
    width = n + len(outside)
    constraints: List[Constraint] = []
    for check in H.row_supports:
        row = [Fraction(0)] * width
        for i in check:
            row[i] = Fraction(1)
        constraints.append(Constraint(tuple(row), Relation.EQ, Fraction(0)))
    for slot, i in enumerate(outside):
        for sign in (1, -1):
            row = [Fraction(0)] * width
            row[n + slot] = Fraction(1)
            row[i] = Fraction(-sign)
            constraints.append(Constraint(tuple(row), Relation.GE, Fraction(0)))
    budget = [Fraction(0)] * n + [Fraction(1)] * len(outside)
    constraints.append(Constraint(tuple(budget), Relation.LE, Fraction(1)))

    objective = [Fraction(0)] * width
    for sigma, i in zip(signs, S.indices):
        objective[i] = -C * sigma
    return LinearProgram(
        objective=tuple(objective),
        constraints=tuple(constraints),
        lower=tuple([None] * n + [Fraction(0)] * len(outside)),
        upper=tuple([None] * width),
    )


def _check_support(query: NspQuery, S: SupportSet) -> NspReport:
    H, C, strict = query.matrix, query.C, query.strict
    if len(S) == 0 or real_rank(H) == H.n:
        return NspReport(query, NspVerdict.HOLDS)
    if C == 0:
        if not strict:
            return NspReport(query, NspVerdict.HOLDS)
        # Strict with C = 0 fails exactly when a nonzero nullspace vector lives on S.
        sub = BinaryMatrix.from_rows(H.column_submatrix(S.indices))
        local = real_nullspace_basis(sub)
        if not local:
            return NspReport(query, NspVerdict.HOLDS)
        nu = [Fraction(0)] * H.n
        for i, v in zip(S.indices, local[0]):
            nu[i] = v
        return _fails(query, S, tuple(nu), 0)

    lps = 0
    for tail in itertools.product((1, -1), repeat=len(S) - 1):
        signs = (1,) + tail
        solution = solve_lp(_support_lp(H, S, C, signs))
        lps += 1
        if solution.status is LpStatus.UNBOUNDED:
            nu = solution.ray[:H.n]
            logger.debug(f"{query.label}: unbounded for signs {signs}")
            return _fails(query, S, nu, lps)
        value = -solution.objective
        if value > 1 or (strict and value == 1):
            logger.debug(f"{query.label}: value {value} for signs {signs}")
            return _fails(query, S, solution.point[:H.n], lps)
    return NspReport(query, NspVerdict.HOLDS, lps_solved=lps)


def check_nsp_support(H: BinaryMatrix, S: SupportSet, C: Number, strict: bool) -> NspReport:
    """Exact decision of NSP≤(S, C) (strict=False) or NSP<(S, C) (strict=True)."""
    query = NspQuery(H, Fraction(C), strict, support=S)
    report = _check_support(query, S)
    logger.debug(f"{query.label}: {report.verdict.value}")
    return report


def check_nsp_k(
    H: BinaryMatrix,
    k: int,
    C: Number,
    strict: bool,
    max_lps: int = DEFAULT_MAX_NSP_LPS,
    workers: int = 1
) -> NspReport:
    """
    Exact decision of NSP(k, C) by checking every support of size exactly k.

    Supports fan out over `workers` processes; the first failing support in
    lexicographic order is reported whatever the completion order.

    Raises:
        GuardExceededError: C(n, k)·2^(k-1) LPs exceed max_lps
    """
    query = NspQuery(H, Fraction(C), strict, k=k)
    if k == 0:
        return NspReport(query, NspVerdict.HOLDS)
    budget = math.comb(H.n, k) * 2 ** (k - 1)
    if budget > max_lps:
        raise GuardExceededError(f"{query.label} needs {budget} LPs, guard is {max_lps}")
    supports = [SupportSet.of(c, H.n) for c in itertools.combinations(range(H.n), k)]
    if workers > 1:
        reports = Parallel(n_jobs=workers)(delayed(_check_support)(query, S) for S in supports)
    else:
        reports = []
        for S in supports:
            reports.append(_check_support(query, S))
            if not reports[-1].holds:
                break
    lps = sum(r.lps_solved for r in reports)
    for r in reports:
        if not r.holds:
            logger.info(f"{query.label} fails on support {list(r.support.indices)}")
            return NspReport(query, NspVerdict.FAILS, r.certificate, r.support, r.left, r.right, lps)
    logger.info(f"{query.label} holds ({lps} LPs)")
    return NspReport(query, NspVerdict.HOLDS, lps_solved=lps)


def nsp_grid_oracle(H: BinaryMatrix, S: SupportSet, C: Number, strict: bool) -> bool:
    """
    Independent brute-force decision of NSP(S, C) for small nullspaces.

    In nullspace coordinates ν = B·z, the slice {‖ν_S̄‖₁ <= 1} is a polytope
    (once no nonzero nullspace vector vanishes off S), and the convex
    function ‖ν_S‖₁ peaks at a vertex. Vertices lie on directions where
    d - 1 independent coordinates of S̄ vanish; each candidate direction is
    normalized and evaluated exactly. No LP is involved.
    """
    C = Fraction(C)
    basis = real_nullspace_basis(H)
    d = len(basis)
    if d == 0 or len(S) == 0:
        return True
    outside = S.complement().indices
    # Nonzero nullspace vectors vanishing on S̄.
    on_support = [[basis[b][i] for b in range(d)] for i in outside]
    if len(rref(on_support)[1]) < d:
        return C == 0 and not strict
    if C == 0:
        return True
    best = Fraction(0)
    for T in itertools.combinations(outside, d - 1):
        rows = [[basis[b][i] for b in range(d)] for i in T]
        reduced, pivots = rref(rows) if rows else ([], [])
        if len(pivots) != d - 1:
            continue
        free = next(c for c in range(d) if c not in pivots)
        z = [Fraction(0)] * d
        z[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            z[p] = -row[free]
        nu = tuple(sum((z[b] * basis[b][i] for b in range(d)), Fraction(0)) for i in range(H.n))
        left, right = nsp_sides(nu, S, C)
        best = max(best, left / right)
    return best < 1 if strict else best <= 1


# ---------------------------------------------------------------------------
# Bridge between nullspace and fundamental cone
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BridgeResult:
    """|ν| with its verified cone membership and support preservation."""
    omega: RealVector
    membership: Membership
    support_preserved: bool


def bridge_map(H: BinaryMatrix, nu: Sequence[Number]) -> BridgeResult:
    """
    Map a real nullspace vector ν to |ν| and verify |ν| ∈ K(H) with supp(|ν|) = supp(ν).

    Raises:
        NotInNullspaceError: H·ν ≠ 0
        SoundnessViolation: |ν| outside K(H) or support changed
    """
    v = real_vector(nu)
    if any(matvec(H, v)):
        raise NotInNullspaceError(f"H·ν ≠ 0 for ν = {[format_rational(x) for x in v]}")
    omega = abs_vector(v)
    membership = cone_contains(H, omega)
    preserved = support(omega) == support(v)
    if not membership.member or not preserved:
        raise SoundnessViolation(
            f"Bridge failed for ν = {[format_rational(x) for x in v]}: "
            f"member={membership.member}, support preserved={preserved}"
        )
    return BridgeResult(omega, membership, preserved)


@dataclass(frozen=True)
class ImplicationReport:
    """min BSC pseudo-weight > 2k  ⇒  NSP<(k, 1), evaluated on both sides."""
    k: int
    min_bsc: PseudoWeightMinimum
    nsp: NspReport
    premise: bool
    conclusion: bool

    @property
    def satisfied(self) -> bool:
        return (not self.premise) or self.conclusion

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "min_bsc_pseudoweight": self.min_bsc.to_dict(),
            "nsp": self.nsp.to_dict(),
            "premise": self.premise,
            "conclusion": self.conclusion,
            "satisfied": self.satisfied,
        }


def bsc_pw_implies_nsp(
    H: BinaryMatrix,
    k: int,
    max_columns: int = DEFAULT_MAX_RAY_COLUMNS,
    max_lps: int = DEFAULT_MAX_NSP_LPS,
    workers: int = 1
) -> ImplicationReport:
    """
    Evaluate both sides of the BSC-pseudo-weight → strict-NSP implication independently.

    A trivial cone counts as infinite minimum pseudo-weight.

    Raises:
        SoundnessViolation: premise true and conclusion false
    """
    minimum = min_pseudoweight(H, PseudoWeightKind.BSC, max_columns)
    premise = minimum.cone_trivial or minimum.value > 2 * k
    nsp = check_nsp_k(H, k, 1, strict=True, max_lps=max_lps, workers=workers)
    report = ImplicationReport(k, minimum, nsp, premise, nsp.holds)
    if not report.satisfied:
        raise SoundnessViolation(
            f"min BSC pseudo-weight {minimum.value} > {2 * k} but NSP<({k}, 1) fails"
        )
    return report


def balancedness_check(omega: Sequence[Number], S: SupportSet) -> bool:
    """‖ω_S‖₁ < ‖ω_S̄‖₁ (strict)."""
    w = real_vector(omega)
    if any(v < 0 for v in w):
        raise NegativeEntryError("balancedness_check needs a nonnegative vector")
    return l1_norm(restrict(w, S)) < l1_norm(restrict(w, S.complement()))


def awgnc_premise(H: BinaryMatrix, Cprime: Number, max_columns: int = DEFAULT_MAX_RAY_COLUMNS) -> bool:
    """w_AWGNC(|ν|) >= C′ for every nonzero nullspace ν, certified by the minimum over K(H)."""
    minimum = min_pseudoweight(H, PseudoWeightKind.AWGNC, max_columns)
    return minimum.cone_trivial or minimum.value >= Fraction(Cprime)


def maxfrac_premise(H: BinaryMatrix, Cprime: Number, workers: int = 1) -> bool:
    """w_maxfrac(|ν|) >= C′ for every nonzero nullspace ν, certified by the LP minimum over K(H)."""
    minimum = min_maxfrac_weight_lp(H, workers=workers)
    return minimum.cone_trivial or minimum.value >= Fraction(Cprime)


# ---------------------------------------------------------------------------
# Guarantee bounds
# ---------------------------------------------------------------------------

class NormPair(str, Enum):
    L1_L1 = "l1/l1"
    L2_L1 = "l2/l1"
    LINF_L1 = "linf/l1"


@dataclass(frozen=True)
class GuaranteeBound:
    """
    Upper bound on ‖e - ê‖_p in terms of ‖e_S̄‖₁.

    `factor` multiplies ‖e_S̄‖₁; `exact` is False when a square root forced
    an outward-rounded enclosure (value is then a valid upper bound).
    """
    norm_pair: NormPair
    constant: Fraction
    k: Optional[int]
    factor: Fraction
    tail_mass: Fraction
    value: Fraction
    exact: bool = True

    def to_dict(self) -> Dict:
        return {
            "norm_pair": self.norm_pair.value,
            "constant": rational_field(self.constant),
            "k": self.k,
            "factor": rational_field(self.factor),
            "tail_mass": rational_field(self.tail_mass),
            "value": rational_field(self.value),
            "exact": self.exact,
        }


def sqrt_bounds(x: Number, bits: int = 64) -> Tuple[Fraction, Fraction]:
    """
    Rational (lower, upper) enclosure of √x; lower == upper when √x is rational.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative number")
    p, q = x.numerator, x.denominator
    root = math.isqrt(p * q)
    if root * root == p * q:
        return Fraction(root, q), Fraction(root, q)
    scale = 1 << bits
    root = math.isqrt(p * q * scale * scale)
    return Fraction(root, q * scale), Fraction(root + 1, q * scale)


def _tail_mass(e: Sequence[Number], S: SupportSet) -> Fraction:
    return l1_norm(restrict(real_vector(e), S.complement()))


def _require_k(k: int, S: SupportSet) -> None:
    if k < 1:
        raise HypothesisError("k must be at least 1")
    if len(S) != k:
        raise HypothesisError(f"|S| = {len(S)} but k = {k}")


def l1l1_bound(C: Number, e: Sequence[Number], S: SupportSet) -> GuaranteeBound:
    """‖e - ê‖₁ <= 2·(C+1)/(C-1)·‖e_S̄‖₁ under NSP≤(|S|, C), C > 1."""
    C = Fraction(C)
    if C <= 1:
        raise HypothesisError(f"l1/l1 guarantee needs C > 1, got {C}")
    factor = 2 * (C + 1) / (C - 1)
    tail = _tail_mass(e, S)
    return GuaranteeBound(NormPair.L1_L1, C, len(S), factor, tail, factor * tail)


def l2l1_bound(Cprime: Number, k: int, e: Sequence[Number], S: SupportSet, bits: int = 64) -> GuaranteeBound:
    """
    ‖e - ê‖₂ <= C″/√k·‖e_S̄‖₁ with C″ = 1/(√(C′/4k) - 1), C′ > 4k.

    C″/√k simplifies to 2/(√C′ - 2√k); the enclosure takes √C′ from below
    and √k from above, refining until the denominator is positive.
    """
    Cprime = Fraction(Cprime)
    _require_k(k, S)
    if Cprime <= 4 * k:
        raise HypothesisError(f"l2/l1 guarantee needs C' > 4k = {4 * k}, got {Cprime}")
    while True:
        c_low, c_high = sqrt_bounds(Cprime, bits)
        k_low, k_high = sqrt_bounds(k, bits)
        denominator = c_low - 2 * k_high
        if denominator > 0:
            break
        bits *= 2
    factor = 2 / denominator
    exact = c_low == c_high and k_low == k_high
    tail = _tail_mass(e, S)
    return GuaranteeBound(NormPair.L2_L1, Cprime, k, factor, tail, factor * tail, exact)


def linfl1_bound(Cprime: Number, k: int, e: Sequence[Number], S: SupportSet) -> GuaranteeBound:
    """‖e - ê‖∞ <= C″/k·‖e_S̄‖₁ with C″ = 1/(C′/2k - 1), C′ > 2k."""
    Cprime = Fraction(Cprime)
    _require_k(k, S)
    if Cprime <= 2 * k:
        raise HypothesisError(f"linf/l1 guarantee needs C' > 2k = {2 * k}, got {Cprime}")
    c2 = 1 / (Cprime / (2 * k) - 1)
    factor = c2 / k
    tail = _tail_mass(e, S)
    return GuaranteeBound(NormPair.LINF_L1, Cprime, k, factor, tail, factor * tail)
