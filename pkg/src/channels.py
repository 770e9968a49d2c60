"""Memoryless channel simulators: BSC, binary-input AWGNC and BEC.

Randomness comes from numpy's counter-based Philox generator keyed by
(seed, trial), so any single trial can be replayed in isolation and
parallel trials never share a stream. BPSK maps bit 0 to +1 and bit 1 to -1.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import ChannelParameterError
from .matrices import RealVector, SupportSet

logger = logging.getLogger(__name__)


class ChannelKind(str, Enum):
    BSC = "bsc"
    AWGNC = "awgnc"
    BEC = "bec"


@dataclass(frozen=True)
class ChannelSpec:
    """BSC(p) with p in (0, 1/2), AWGNC(σ) with σ > 0, or BEC(ε) with ε in (0, 1)."""
    kind: ChannelKind
    parameter: float

    def __post_init__(self):
        object.__setattr__(self, 'kind', ChannelKind(self.kind))
        value = float(self.parameter)
        if not math.isfinite(value):
            raise ChannelParameterError(f"{self.kind.value} parameter must be finite")
        if self.kind is ChannelKind.BSC and not 0 < value < 0.5:
            raise ChannelParameterError(f"BSC crossover probability must be in (0, 1/2), got {value}")
        if self.kind is ChannelKind.AWGNC and not value > 0:
            raise ChannelParameterError(f"AWGNC noise deviation must be positive, got {value}")
        if self.kind is ChannelKind.BEC and not 0 < value < 1:
            raise ChannelParameterError(f"BEC erasure probability must be in (0, 1), got {value}")
        object.__setattr__(self, 'parameter', value)

    @classmethod
    def parse(cls, text: str) -> "ChannelSpec":
        """Parse 'bsc:0.05', 'awgnc:0.8' or 'bec:0.3'."""
        kind, sep, value = text.partition(":")
        if not sep:
            raise ChannelParameterError(f"Channel must look like kind:parameter, got '{text}'")
        try:
            return cls(ChannelKind(kind.strip().lower()), float(value))
        except ValueError as e:
            if isinstance(e, ChannelParameterError):
                raise
            raise ChannelParameterError(f"Invalid channel '{text}': {e}") from e

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.parameter:g}"


@dataclass(frozen=True)
class ChannelOutput:
    """
    One channel use of a length-n word.

    `received` holds bits (BSC), floats (AWGNC) or bits with None at
    erasures (BEC). `flips` is the applied flip set for the BSC, the
    hard-decision error set for the AWGNC and the erasure set for the BEC.
    """
    spec: ChannelSpec
    received: Tuple
    flips: SupportSet
    seed: int
    trial: int = 0
    sent: Tuple[int, ...] = field(default=(), repr=False)

    def to_dict(self) -> Dict:
        return {
            "channel": str(self.spec),
            "received": list(self.received),
            "flips": list(self.flips.indices),
            "seed": self.seed,
            "trial": self.trial,
        }


def trial_rng(seed: int, trial: int = 0, *stream: int) -> np.random.Generator:
    """Independent Philox stream keyed by (seed, trial, *stream); all keys nonnegative."""
    keys = [int(seed), int(trial)] + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(keys)))


def transmit(x: Sequence[int], spec: ChannelSpec, seed: int, trial: int = 0) -> ChannelOutput:
    """Send the binary word x through the channel; deterministic given (seed, trial)."""
    bits = np.asarray([int(b) for b in x], dtype=np.int64)
    if np.any((bits != 0) & (bits != 1)):
        raise ChannelParameterError("transmit expects a binary word")
    n = len(bits)
    rng = trial_rng(seed, trial)

    if spec.kind is ChannelKind.BSC:
        flipped = rng.random(n) < spec.parameter
        received = tuple(int(b) for b in bits ^ flipped.astype(np.int64))
        flips = np.flatnonzero(flipped)
    elif spec.kind is ChannelKind.AWGNC:
        symbols = 1.0 - 2.0 * bits
        y = symbols + spec.parameter * rng.standard_normal(n)
        received = tuple(float(v) for v in y)
        flips = np.flatnonzero(np.sign(y) != symbols)
    else:
        erased = rng.random(n) < spec.parameter
        received = tuple(None if e else int(b) for b, e in zip(bits, erased))
        flips = np.flatnonzero(erased)

    return ChannelOutput(
        spec=spec,
        received=received,
        flips=SupportSet.of((int(i) for i in flips), n),
        seed=int(seed),
        trial=int(trial),
        sent=tuple(int(b) for b in bits),
    )


def llr(out: ChannelOutput, spec: Optional[ChannelSpec] = None, unit: bool = False) -> RealVector:
    """
    Log-likelihood ratios λ_i = log(P(y_i|0) / P(y_i|1)) as exact rationals.

    BSC: ±L with L = ln((1-p)/p), or ±1 with unit=True (decisions are
    invariant to positive scaling). AWGNC: 2·y_i/σ², computed from the exact
    binary values of y_i and σ so no float rounding reaches the decoder.

    Raises:
        ChannelParameterError: for the BEC
    """
    spec = spec or out.spec
    if spec.kind is ChannelKind.BEC:
        raise ChannelParameterError("BEC outputs have no finite LLR; use bec_peel")
    if spec.kind is ChannelKind.BSC:
        L = Fraction(1) if unit else Fraction(math.log((1 - spec.parameter) / spec.parameter))
        return tuple(L if b == 0 else -L for b in out.received)
    sigma = Fraction(spec.parameter)
    scale = Fraction(2) / (sigma * sigma)
    return tuple(scale * Fraction(y) for y in out.received)


def flip_llr(n: int, flips: SupportSet) -> RealVector:
    """Unit BSC cost vector: -1 on the flip set, +1 elsewhere (all-zero word sent)."""
    return tuple(Fraction(-1) if i in flips else Fraction(1) for i in range(n))


def empirical_flip_rate(spec: ChannelSpec, n: int, seed: int) -> float:
    """Fraction of flipped (or erased) positions in n channel uses of the all-zero word."""
    out = transmit([0] * n, spec, seed)
    rate = len(out.flips) / n
    logger.debug(f"{spec}: empirical rate {rate:.5f} over {n} uses")
    return rate
