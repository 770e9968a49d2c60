"""
Experiment runners: randomized sweeps that exercise the decoders against
the lemmas and theorems they are supposed to satisfy.

Every runner takes an ExperimentConfig and returns ResultRows, one per
matrix. Trials are independent, keyed by (seed, matrix or support index,
trial) and fanned out over joblib workers; rows are assembled in job order so
the output does not depend on the worker count. A nonzero `violations`
count in any row is a soundness failure.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .channels import ChannelKind, ChannelSpec, flip_llr, llr, transmit, trial_rng
from .cone import DEFAULT_MAX_ROW_WEIGHT
from .decoders import (
    DEFAULT_CS_OPT_MAX_COLUMNS, DEFAULT_CS_OPT_MAX_K, DecodeStatus, StuckReport, bec_peel, cc_lpd,
    cc_mld, cs_backsub, cs_lpd, cs_opt, zero_codeword_certificate
)
from .errors import GuardExceededError, SoundnessViolation
from .matrices import (
    DEFAULT_MAX_CODE_DIMENSION, BinaryMatrix, RealVector, SupportSet, best_k_support,
    enumerate_codewords, l1_norm, l2_squared, linf_norm, matvec, real_nullspace_basis
)
from .nsp import (
    DEFAULT_MAX_NSP_LPS, awgnc_premise, balancedness_check, bridge_map, check_nsp_k, l1l1_bound,
    l2l1_bound, linfl1_bound, maxfrac_premise
)
from .pseudoweight import (
    DEFAULT_MAX_RAY_COLUMNS, PseudoWeightKind, bsc_halfweight_check, enumerate_extreme_rays,
    maxfrac_weight, min_maxfrac_weight_lp, min_pseudoweight
)
from .reporting import format_rational

logger = logging.getLogger(__name__)

GUARANTEE_NORMS = ("l1", "l2", "linf")

# Stream tags for trial_rng so that different draws of one trial stay independent.
# Corpus keys carry a fourth word so they never meet a (seed, index, trial) key.
_CORPUS_STREAM = 1
_CODEWORD_STREAM = 2


@dataclass(frozen=True)
class Guards:
    """Enumeration limits shared by every runner."""
    max_code_dimension: int = DEFAULT_MAX_CODE_DIMENSION
    max_ray_columns: int = DEFAULT_MAX_RAY_COLUMNS
    max_row_weight: int = DEFAULT_MAX_ROW_WEIGHT
    max_nsp_lps: int = DEFAULT_MAX_NSP_LPS
    cs_opt_max_columns: int = DEFAULT_CS_OPT_MAX_COLUMNS
    cs_opt_max_k: int = DEFAULT_CS_OPT_MAX_K

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "Guards":
        section = section or {}
        known = {k: int(v) for k, v in section.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass(frozen=True)
class MatrixCase:
    matrix_id: str
    matrix: BinaryMatrix


@dataclass
class ExperimentConfig:
    """
    One experiment run.

    Args:
        task: runner name (see RUNNERS)
        cases: matrices to run on; peel-equiv with no cases draws random matrices
        trials: trial count per matrix (per support for equivalence and translate)
        seed: base seed, recorded in every row
        k: sparsity / flip-set size
        C: NSP constant for the l1/l1 guarantee
        Cprime: pseudo-weight constant for the l2/l1 and linf/l1 guarantees (default: certified minimum)
        norm: guarantee norm, one of l1, l2, linf
        channel: channel for the relaxation sandwich
        workers: joblib processes (1 = serial)
        magnitude_max: numerator/denominator bound for random rationals
    """
    task: str
    cases: List[MatrixCase] = field(default_factory=list)
    trials: int = 100
    seed: int = 7
    k: int = 1
    C: Optional[Fraction] = None
    Cprime: Optional[Fraction] = None
    norm: str = "l1"
    channel: Optional[ChannelSpec] = None
    workers: int = 1
    magnitude_max: int = 9
    guards: Guards = field(default_factory=Guards)

    def __post_init__(self):
        if self.task not in RUNNERS:
            raise ValueError(f"Unknown task '{self.task}'. Must be one of: {', '.join(RUNNERS)}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.magnitude_max < 1:
            raise ValueError(f"magnitude_max must be >= 1, got {self.magnitude_max}")
        if self.task != "peel-equiv" and not self.cases:
            raise ValueError(f"Task '{self.task}' needs at least one matrix")
        if self.task in ("equivalence", "translate", "guarantee") and self.k < 1:
            raise ValueError(f"Task '{self.task}' needs k >= 1")
        if self.task == "guarantee":
            if self.norm not in GUARANTEE_NORMS:
                raise ValueError(f"norm must be one of {GUARANTEE_NORMS}, got '{self.norm}'")
            if self.norm == "l1" and self.C is None:
                raise ValueError("The l1/l1 guarantee needs the NSP constant C")
        if self.task == "sandwich":
            if self.channel is None or self.channel.kind is ChannelKind.BEC:
                raise ValueError("The relaxation sandwich needs a BSC or AWGNC channel")


@dataclass
class ResultRow:
    """Aggregate outcome of one task on one matrix."""
    task: str
    matrix_id: str
    seed: int
    parameters: Dict[str, Any]
    trials: int = 0
    successes: int = 0
    violations: int = 0
    skipped: bool = False
    outcomes: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        row = {
            "task": self.task,
            "matrix_id": self.matrix_id,
            "seed": self.seed,
            "parameters": self.parameters,
            "trials": self.trials,
            "successes": self.successes,
            "violations": self.violations,
            "skipped": self.skipped,
        }
        row.update(self.outcomes)
        if include_timing:
            row["wall_time"] = round(self.wall_time, 6)
        return row


def result_columns(rows: Sequence[Dict[str, Any]]) -> List[str]:
    """Union of row keys in first-seen order, for a stable CSV header."""
    columns: Dict[str, None] = {}
    for row in rows:
        for key in row:
            columns.setdefault(key, None)
    return list(columns)


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------

def random_rational(rng, magnitude_max: int) -> Fraction:
    """Nonzero rational ±p/q with 1 <= p, q <= magnitude_max."""
    p = int(rng.integers(1, magnitude_max + 1))
    q = int(rng.integers(1, magnitude_max + 1))
    return Fraction(p, q) if rng.random() < 0.5 else Fraction(-p, q)


def random_supported_vector(rng, n: int, S: Iterable[int], magnitude_max: int) -> RealVector:
    """Vector with random nonzero rationals exactly on S."""
    values = [Fraction(0)] * n
    for i in S:
        values[i] = random_rational(rng, magnitude_max)
    return tuple(values)


def random_binary_matrix(rng, m: int, n: int, density: float) -> BinaryMatrix:
    entries = (rng.random((m, n)) < density).astype(int)
    return BinaryMatrix.from_rows(entries.tolist())


def random_matrix_corpus(
    count: int,
    seed: int,
    max_m: int = 20,
    max_n: int = 30,
    density: Tuple[float, float] = (0.2, 0.5)
) -> List[MatrixCase]:
    """Random 0/1 matrices with m <= max_m, n <= max_n and density drawn from the given range."""
    cases = []
    for index in range(count):
        rng = trial_rng(seed, index, 0, _CORPUS_STREAM)
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(2, max_n + 1))
        d = float(rng.uniform(*density))
        cases.append(MatrixCase(f"random-{index}", random_binary_matrix(rng, m, n, d)))
    return cases


def _fan_out(function: Callable, jobs: Sequence[Tuple], workers: int) -> List:
    """Evaluate function(*job) for every job, in job order."""
    if workers > 1 and len(jobs) > 1:
        return Parallel(n_jobs=workers)(delayed(function)(*job) for job in jobs)
    return [function(*job) for job in jobs]


def _supports_up_to(n: int, k: int) -> List[SupportSet]:
    return [
        SupportSet.of(c, n)
        for size in range(1, min(k, n) + 1)
        for c in itertools.combinations(range(n), size)
    ]


def _row(config: ExperimentConfig, case: MatrixCase, **parameters) -> ResultRow:
    return ResultRow(config.task, case.matrix_id, config.seed, dict(parameters))


# ---------------------------------------------------------------------------
# Bridge sweep
# ---------------------------------------------------------------------------

def _bridge_trial(
    H: BinaryMatrix, basis: List[RealVector], seed: int, index: int, trial: int, magnitude_max: int
) -> bool:
    rng = trial_rng(seed, index, trial)
    nu = [Fraction(0)] * H.n
    for b in basis:
        if rng.random() < 0.5:
            c = random_rational(rng, magnitude_max)
            nu = [x + c * y for x, y in zip(nu, b)]
    try:
        bridge_map(H, nu)
    except SoundnessViolation as e:
        logger.error(str(e))
        return False
    return True


def run_bridge_sweep(config: ExperimentConfig) -> List[ResultRow]:
    """|ν| ∈ K(H) with supp(|ν|) = supp(ν) for random rational nullspace vectors ν."""
    rows = []
    for index, case in enumerate(config.cases):
        start = time.perf_counter()
        H = case.matrix
        basis = real_nullspace_basis(H)
        jobs = [(H, basis, config.seed, index, t, config.magnitude_max) for t in range(config.trials)]
        results = _fan_out(_bridge_trial, jobs, config.workers)
        row = _row(config, case, magnitude_max=config.magnitude_max)
        row.trials = len(results)
        row.successes = sum(results)
        row.violations = row.trials - row.successes
        row.outcomes = {"nullspace_dimension": len(basis)}
        row.wall_time = time.perf_counter() - start
        logger.info(f"bridge {case.matrix_id}: {row.successes}/{row.trials} memberships verified")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# CS-LPD = CS-OPT under NSP<(k, 1)
# ---------------------------------------------------------------------------

def _equivalence_trial(
    H: BinaryMatrix, S: SupportSet, k: int, seed: int, index: int, trial: int, magnitude_max: int,
    guards: Guards
) -> str:
    rng = trial_rng(seed, index, trial)
    e = random_supported_vector(rng, H.n, S, magnitude_max)
    s = matvec(H, e)
    relaxed = cs_lpd(H, s)
    exact = cs_opt(H, s, k, guards.cs_opt_max_columns, guards.cs_opt_max_k)
    if relaxed.status is DecodeStatus.TIE or exact.status is DecodeStatus.TIE:
        return "tie"
    if relaxed.success and exact.success and relaxed.estimate == exact.estimate == e:
        return "agree"
    logger.error(
        f"cs_lpd {relaxed.status.value} {relaxed.estimate} vs cs_opt {exact.status.value} "
        f"{exact.estimate} for e={[format_rational(v) for v in e]}"
    )
    return "disagree"


def run_equivalence(config: ExperimentConfig) -> List[ResultRow]:
    """On matrices certified NSP<(k, 1): cs_lpd = cs_opt for every support of size <= k."""
    rows = []
    for case in config.cases:
        start = time.perf_counter()
        H = case.matrix
        row = _row(
            config, case, k=config.k, magnitude_max=config.magnitude_max, trials_per_support=config.trials
        )
        report = check_nsp_k(
            H, config.k, 1, strict=True, max_lps=config.guards.max_nsp_lps, workers=config.workers
        )
        row.outcomes["nsp_certified"] = report.holds
        if not report.holds:
            logger.warning(f"{case.matrix_id}: NSP<({config.k}, 1) fails, equivalence run skipped")
            row.skipped = True
            rows.append(row)
            continue
        supports = _supports_up_to(H.n, config.k)
        jobs = [
            (H, S, config.k, config.seed, index, t, config.magnitude_max, config.guards)
            for index, S in enumerate(supports)
            for t in range(config.trials)
        ]
        results = _fan_out(_equivalence_trial, jobs, config.workers)
        row.trials = len(results)
        row.successes = results.count("agree")
        row.violations = results.count("disagree")
        row.outcomes.update({"supports": len(supports), "ties": results.count("tie")})
        row.wall_time = time.perf_counter() - start
        logger.info(f"equivalence {case.matrix_id}: {row.successes}/{row.trials} agree")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Point-wise translation from CC-LPD to CS-LPD
# ---------------------------------------------------------------------------

def _translation_trial(
    H: BinaryMatrix, S: SupportSet, seed: int, index: int, trial: int, magnitude_max: int
) -> bool:
    rng = trial_rng(seed, index, trial)
    e = random_supported_vector(rng, H.n, S, magnitude_max)
    result = cs_lpd(H, matvec(H, e))
    if result.success and result.estimate == e:
        return True
    logger.error(f"CC-LPD corrects flips at {list(S.indices)} but cs_lpd missed e={[format_rational(v) for v in e]}")
    return False


def _corrects_zero_word(H: BinaryMatrix, S: SupportSet, max_row_weight: int) -> bool:
    result = cc_lpd(H, flip_llr(H.n, S), max_row_weight)
    return result.success and not any(result.estimate)


def run_translation(config: ExperimentConfig) -> List[ResultRow]:
    """
    Every flip set S (|S| <= k) that CC-LPD corrects on the all-zero word is
    a support on which cs_lpd recovers every e.

    Every corrected support gets `trials` random e of its own. Alongside,
    the fundamental-cone certificate must agree with cc_lpd on every flip
    set, and flip sets balanced against every extreme ray must be corrected.
    """
    rows = []
    for case in config.cases:
        start = time.perf_counter()
        H = case.matrix
        row = _row(
            config, case, k=config.k, magnitude_max=config.magnitude_max, trials_per_support=config.trials
        )
        supports = _supports_up_to(H.n, config.k)
        corrected: List[Tuple[int, SupportSet]] = []
        mismatches = 0
        for index, S in enumerate(supports):
            ok = _corrects_zero_word(H, S, config.guards.max_row_weight)
            if ok:
                corrected.append((index, S))
            if zero_codeword_certificate(H, flip_llr(H.n, S)).decodes_to_zero != ok:
                logger.error(f"{case.matrix_id}: cone certificate disagrees with cc_lpd on {list(S.indices)}")
                mismatches += 1

        corrected_sets = {S for _, S in corrected}
        chain_violations = 0
        balanced = None
        if H.n <= config.guards.max_ray_columns:
            rays = enumerate_extreme_rays(H, config.guards.max_ray_columns)
            balanced = 0
            for S in supports:
                if all(balancedness_check(r.generator, S) for r in rays):
                    balanced += 1
                    if S not in corrected_sets:
                        logger.error(f"{case.matrix_id}: {list(S.indices)} balanced but not corrected")
                        chain_violations += 1

        results: List[bool] = []
        if corrected:
            jobs = [
                (H, S, config.seed, index, t, config.magnitude_max)
                for index, S in corrected
                for t in range(config.trials)
            ]
            results = _fan_out(_translation_trial, jobs, config.workers)
        else:
            logger.warning(f"{case.matrix_id}: CC-LPD corrects no flip set of size <= {config.k}")
            row.skipped = True

        row.trials = len(results)
        row.successes = sum(results)
        row.violations = (row.trials - row.successes) + mismatches + chain_violations
        row.outcomes = {
            "supports": len(supports),
            "supports_corrected": len(corrected),
            "certificate_mismatches": mismatches,
            "balanced_supports": balanced,
            "chain_violations": chain_violations,
        }
        row.wall_time = time.perf_counter() - start
        logger.info(
            f"translate {case.matrix_id}: {row.successes}/{row.trials} point-wise implications satisfied"
        )
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Guarantee bounds
# ---------------------------------------------------------------------------

def _approximately_sparse(rng, n: int, k: int, magnitude_max: int) -> RealVector:
    """k large entries on a random support plus small noise on about half of the others."""
    head = set(int(i) for i in rng.choice(n, size=k, replace=False))
    values = []
    for i in range(n):
        if i in head:
            values.append(random_rational(rng, magnitude_max) * magnitude_max)
        elif rng.random() < 0.5:
            values.append(random_rational(rng, magnitude_max) / (magnitude_max * magnitude_max))
        else:
            values.append(Fraction(0))
    return tuple(values)


def _guarantee_trial(
    H: BinaryMatrix, norm: str, constant: Fraction, k: int, seed: int, index: int, trial: int,
    magnitude_max: int
) -> Tuple[bool, Fraction]:
    """(bound respected, slack) for one approximately sparse e."""
    rng = trial_rng(seed, index, trial)
    e = _approximately_sparse(rng, H.n, k, magnitude_max)
    result = cs_lpd(H, matvec(H, e))
    difference = tuple(a - b for a, b in zip(e, result.estimate))
    S = best_k_support(e, k)
    if norm == "l1":
        bound = l1l1_bound(constant, e, S).value
        error = l1_norm(difference)
        respected = error <= bound
    elif norm == "l2":
        bound = l2l1_bound(constant, k, e, S).value
        error = l2_squared(difference)
        respected = error <= bound * bound
        bound = bound * bound
    else:
        bound = linfl1_bound(constant, k, e, S).value
        error = linf_norm(difference)
        respected = error <= bound
    if not respected:
        logger.error(f"{norm} bound {bound} violated by error {error} for e={[format_rational(v) for v in e]}")
    return respected, bound - error


def _guarantee_constant(config: ExperimentConfig, case: MatrixCase) -> Tuple[Optional[Fraction], str]:
    """Certified constant for the configured norm, or (None, reason)."""
    H, k = case.matrix, config.k
    if k > H.n:
        return None, f"k={k} exceeds n={H.n}"
    if config.norm == "l1":
        C = Fraction(config.C)
        if C <= 1:
            return None, f"C={C} is not > 1"
        report = check_nsp_k(H, k, C, strict=False, max_lps=config.guards.max_nsp_lps, workers=config.workers)
        return (C, "") if report.holds else (None, f"NSP<=({k}, {C}) fails")

    if config.norm == "l2":
        threshold = 4 * k
        if config.Cprime is not None:
            Cprime = Fraction(config.Cprime)
            certified = awgnc_premise(H, Cprime, config.guards.max_ray_columns)
        else:
            minimum = min_pseudoweight(H, PseudoWeightKind.AWGNC, config.guards.max_ray_columns)
            Cprime, certified = minimum.value, not minimum.cone_trivial
    else:
        threshold = 2 * k
        if config.Cprime is not None:
            Cprime = Fraction(config.Cprime)
            certified = maxfrac_premise(H, Cprime, config.workers)
        else:
            minimum = min_maxfrac_weight_lp(H, config.workers)
            Cprime, certified = minimum.value, not minimum.cone_trivial

    if not certified:
        return None, "pseudo-weight premise not certified"
    if Cprime <= threshold:
        return None, f"C'={Cprime} is not > {threshold}"
    return Cprime, ""


def run_guarantee(config: ExperimentConfig) -> List[ResultRow]:
    """Zero-violation runs of the l1/l1, l2/l1 and linf/l1 bounds on matrices whose premise is certified."""
    rows = []
    for index, case in enumerate(config.cases):
        start = time.perf_counter()
        row = _row(config, case, k=config.k, norm=config.norm, magnitude_max=config.magnitude_max)
        constant, reason = _guarantee_constant(config, case)
        row.outcomes = {"constant": None if constant is None else format_rational(constant), "min_slack": None}
        if constant is None:
            logger.warning(f"{case.matrix_id}: {config.norm} guarantee skipped ({reason})")
            row.skipped = True
            rows.append(row)
            continue
        jobs = [
            (case.matrix, config.norm, constant, config.k, config.seed, index, t, config.magnitude_max)
            for t in range(config.trials)
        ]
        results = _fan_out(_guarantee_trial, jobs, config.workers)
        row.trials = len(results)
        row.successes = sum(1 for ok, _ in results if ok)
        row.violations = row.trials - row.successes
        row.outcomes["min_slack"] = format_rational(min(slack for _, slack in results))
        row.wall_time = time.perf_counter() - start
        logger.info(f"guarantee {config.norm} {case.matrix_id}: {row.violations} violations in {row.trials} trials")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Peeling equals back-substitution
# ---------------------------------------------------------------------------

def _peel_trial(
    H: Optional[BinaryMatrix], seed: int, index: int, trial: int, magnitude_max: int
) -> Tuple[bool, bool]:
    """(decoders agree, peeling got stuck) for one random (matrix, support) pair."""
    rng = trial_rng(seed, index, trial)
    if H is None:
        m = int(rng.integers(1, 9))
        n = int(rng.integers(2, 13))
        H = random_binary_matrix(rng, m, n, float(rng.uniform(0.2, 0.5)))
    rate = float(rng.uniform(0.1, 0.6))
    S = SupportSet.of((i for i in range(H.n) if rng.random() < rate), H.n)
    e = random_supported_vector(rng, H.n, S, magnitude_max)

    peeled = bec_peel(H, [None if i in S else 0 for i in range(H.n)])
    solved = cs_backsub(H, matvec(H, e), S)
    if isinstance(peeled, StuckReport) and isinstance(solved, StuckReport):
        return peeled.residual == solved.residual, True
    if not isinstance(peeled, StuckReport) and not isinstance(solved, StuckReport):
        return not any(peeled) and solved == e, False
    logger.error(f"Peeling and back-substitution disagree on support {list(S.indices)} of {H.entries}")
    return False, isinstance(peeled, StuckReport)


def run_peel_equivalence(config: ExperimentConfig) -> List[ResultRow]:
    """
    bec_peel and cs_backsub agree on success/stuck and on the residual set.

    Without matrices, every trial draws its own random matrix.
    """
    cases: List[Optional[MatrixCase]] = list(config.cases) or [None]
    rows = []
    for index, case in enumerate(cases):
        start = time.perf_counter()
        H = None if case is None else case.matrix
        jobs = [(H, config.seed, index, t, config.magnitude_max) for t in range(config.trials)]
        results = _fan_out(_peel_trial, jobs, config.workers)
        row = ResultRow(
            config.task, "random" if case is None else case.matrix_id, config.seed,
            {"magnitude_max": config.magnitude_max}
        )
        row.trials = len(results)
        row.successes = sum(1 for agree, _ in results if agree)
        row.violations = row.trials - row.successes
        row.outcomes = {"stuck": sum(1 for _, stuck in results if stuck)}
        row.wall_time = time.perf_counter() - start
        logger.info(f"peel-equiv {row.matrix_id}: {row.successes}/{row.trials} agree")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Relaxation sandwich: CC-LPD objective <= CC-MLD objective
# ---------------------------------------------------------------------------

def _sandwich_trial(
    H: BinaryMatrix, codewords: List[Tuple[int, ...]], spec: ChannelSpec, seed: int, trial: int,
    max_row_weight: int, max_dimension: int
) -> Dict[str, bool]:
    pick = int(trial_rng(seed, trial, _CODEWORD_STREAM).integers(len(codewords)))
    out = transmit(codewords[pick], spec, seed, trial)
    costs = llr(out, spec, unit=spec.kind is ChannelKind.BSC)
    relaxed = cc_lpd(H, costs, max_row_weight)
    exact = cc_mld(H, costs, max_dimension)
    ok = relaxed.objective <= exact.objective
    if relaxed.success:
        ok = ok and relaxed.objective == exact.objective
        if exact.success:
            ok = ok and relaxed.estimate == exact.estimate
    if not ok:
        logger.error(
            f"Sandwich violated: cc_lpd {relaxed.status.value} {relaxed.objective} vs cc_mld {exact.objective}"
        )
    return {
        "ok": ok,
        "lp_success": relaxed.success,
        "fractional": relaxed.status is DecodeStatus.FRACTIONAL,
        "tie": relaxed.status is DecodeStatus.TIE,
        "ml_correct": exact.success and exact.estimate == out.sent,
    }


def run_relaxation_sandwich(config: ExperimentConfig) -> List[ResultRow]:
    """cc_lpd objective <= cc_mld objective, with equality (and the same word) on cc_lpd success."""
    rows = []
    for case in config.cases:
        start = time.perf_counter()
        H = case.matrix
        codewords = enumerate_codewords(H, config.guards.max_code_dimension)
        jobs = [
            (H, codewords, config.channel, config.seed, t, config.guards.max_row_weight,
             config.guards.max_code_dimension)
            for t in range(config.trials)
        ]
        results = _fan_out(_sandwich_trial, jobs, config.workers)
        row = _row(config, case, channel=str(config.channel))
        row.trials = len(results)
        row.successes = sum(r["lp_success"] for r in results)
        row.violations = sum(not r["ok"] for r in results)
        row.outcomes = {
            "fractional": sum(r["fractional"] for r in results),
            "ties": sum(r["tie"] for r in results),
            "ml_correct": sum(r["ml_correct"] for r in results),
        }
        row.wall_time = time.perf_counter() - start
        logger.info(f"sandwich {case.matrix_id}: {row.successes}/{row.trials} LP successes")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Extreme-ray checks
# ---------------------------------------------------------------------------

def _small_enough(config: ExperimentConfig, case: MatrixCase) -> bool:
    if case.matrix.n > config.guards.max_ray_columns:
        logger.warning(
            f"{case.matrix_id}: n={case.matrix.n} above the ray guard {config.guards.max_ray_columns}, skipped"
        )
        return False
    return True


def run_halfweight(config: ExperimentConfig) -> List[ResultRow]:
    """Strict balancedness of every extreme ray for every |S| below half its BSC and BSC′ pseudo-weight."""
    rows = []
    for case in config.cases:
        start = time.perf_counter()
        row = _row(config, case)
        if not _small_enough(config, case):
            row.skipped = True
            rows.append(row)
            continue
        rays = enumerate_extreme_rays(case.matrix, config.guards.max_ray_columns)
        checks = [
            bsc_halfweight_check(r.generator, kind)
            for r in rays
            for kind in (PseudoWeightKind.BSC, PseudoWeightKind.BSC_PRIME)
        ]
        row.trials = len(checks)
        row.successes = sum(checks)
        row.violations = row.trials - row.successes
        row.outcomes = {"rays": len(rays)}
        row.wall_time = time.perf_counter() - start
        rows.append(row)
    return rows


def run_maxfrac_crosscheck(config: ExperimentConfig) -> List[ResultRow]:
    """The LP minimum of the max-fractional weight equals the minimum over extreme rays."""
    rows = []
    for case in config.cases:
        start = time.perf_counter()
        row = _row(config, case)
        if not _small_enough(config, case):
            row.skipped = True
            rows.append(row)
            continue
        rays = enumerate_extreme_rays(case.matrix, config.guards.max_ray_columns)
        by_rays = min((maxfrac_weight(r.generator) for r in rays), default=None)
        by_lp = min_maxfrac_weight_lp(case.matrix, config.workers).value
        row.trials = 1
        row.successes = int(by_rays == by_lp)
        row.violations = 1 - row.successes
        row.outcomes = {
            "by_rays": None if by_rays is None else format_rational(by_rays),
            "by_lp": None if by_lp is None else format_rational(by_lp),
        }
        if row.violations:
            logger.error(f"{case.matrix_id}: max-fractional minimum {by_lp} (LP) vs {by_rays} (rays)")
        row.wall_time = time.perf_counter() - start
        rows.append(row)
    return rows


RUNNERS: Dict[str, Callable[[ExperimentConfig], List[ResultRow]]] = {
    "bridge": run_bridge_sweep,
    "equivalence": run_equivalence,
    "translate": run_translation,
    "guarantee": run_guarantee,
    "peel-equiv": run_peel_equivalence,
    "sandwich": run_relaxation_sandwich,
    "halfweight": run_halfweight,
    "maxfrac-check": run_maxfrac_crosscheck,
}


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    """Dispatch to the task's runner; guard errors propagate to the caller."""
    logger.info(f"Running {config.task} on {len(config.cases) or 'random'} matrices, seed {config.seed}")
    try:
        return RUNNERS[config.task](config)
    except GuardExceededError:
        logger.error(f"{config.task}: enumeration guard exceeded")
        raise


def total_violations(rows: Iterable[ResultRow]) -> int:
    return sum(r.violations for r in rows)
