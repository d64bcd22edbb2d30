"""Shared configuration objects for the link simulator."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

E_X = 2.0  # 4-QAM symbol energy, |x|^2 for x in {+-1 +-j}


class Scheme(Enum):
    CAMF = "CAMF"
    CUIF = "CUIF"
    ENERGY = "ENERGY"
    GENIE_CAMF = "GENIE_CAMF"
    GENIE_CUIF = "GENIE_CUIF"


EM_SCHEMES = (Scheme.CAMF, Scheme.CUIF)
GENIE_SCHEMES = (Scheme.GENIE_CAMF, Scheme.GENIE_CUIF)


@dataclass(frozen=True)
class EmConfig:
    """Stopping rule and initialization knobs for the EM receiver."""

    n_iter_max: int = 5
    epsilon: float = 1e-12
    initial_phase_error_bound: float = np.pi / 4
    pilot_first: bool = True
    # Restart offsets (radians) around the rough phase estimate for the
    # common-phase constrained mode; the run with the highest final
    # log-likelihood wins. The unconstrained mode always runs one descent.
    # A single 0.0 entry reproduces plain one-shot EM everywhere.
    start_offsets: tuple = (0.0, -0.5, 0.5)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.n_iter_max < 1:
            raise ValueError("n_iter_max must be >= 1")


@dataclass(frozen=True)
class SimParams:
    """One Monte Carlo operating point."""

    L: int = 32
    M: int = 100
    P: int = 4
    alpha_sq: float = 0.2
    snr_db: float = 6.0
    scheme: Scheme = Scheme.CAMF
    em: EmConfig = field(default_factory=EmConfig)
    slots: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (self.L >= self.P >= 1):
            raise ValueError(f"need L >= P >= 1, got L={self.L}, P={self.P}")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.slots < 1:
            raise ValueError("slots must be >= 1")
        if not (0.0 < self.alpha_sq <= 1.0):
            raise ValueError("alpha_sq must be in (0, 1]")

    @property
    def n0(self) -> float:
        """Noise level; SNR of the legacy link is defined as 1/N0."""
        return 1.0 / 10.0 ** (self.snr_db / 10.0)

    def with_(self, **kwargs) -> "SimParams":
        return replace(self, **kwargs)
