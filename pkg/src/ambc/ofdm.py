"""Legacy 4-QAM OFDM frames and per-subcarrier ML symbol decisions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Constellation:
    """Constant-modulus constellation with a fixed point ordering.

    The ordering doubles as the bit mapping: point index i carries the Gray
    bit pair (b_I, b_Q) = (i >> 1, i & 1) with I = 1 - 2 b_I, Q = 1 - 2 b_Q.
    """

    points: np.ndarray
    symbol_energy: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if not np.allclose(np.abs(pts) ** 2, self.symbol_energy):
            raise ValueError("constellation is not constant-modulus")
        if not np.isclose(pts.mean(), 0.0):
            raise ValueError("constellation is not zero-mean")


def qam4() -> Constellation:
    """4-QAM {+-1 +-j}, E_x = 2, Gray-ordered."""
    return Constellation(
        points=np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]),
        symbol_energy=2.0,
    )


def gen_frame(L: int, M: int, constellation: Constellation,
              rng: np.random.Generator) -> np.ndarray:
    """L x M grid of i.i.d. uniform constellation symbols."""
    if L < 1 or M < 1:
        raise ValueError("L and M must be >= 1")
    idx = rng.integers(0, constellation.points.size, size=(L, M))
    return constellation.points[idx]


def qam_detect(y: complex, effective_gain: complex,
               constellation: Constellation) -> complex:
    """Exhaustive ML decision: the point minimizing |y - gain*x|^2.

    Ties (including gain = 0) resolve to the first point in the fixed
    ordering via argmin.
    """
    d = np.abs(y - effective_gain * constellation.points) ** 2
    return constellation.points[int(np.argmin(d))]


def detect_grid(y: np.ndarray, effective_gain: np.ndarray,
                constellation: Constellation) -> np.ndarray:
    """Vectorized qam_detect over an L x M grid with per-subcarrier gains."""
    # broadcast to (L, M, |X|)
    d = np.abs(y[..., None]
               - effective_gain[:, None, None] * constellation.points) ** 2
    return constellation.points[np.argmin(d, axis=-1)]


def bits_to_symbols(bits: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Map bit pairs (..., 2) to points using the documented Gray order."""
    idx = (bits[..., 0] << 1) | bits[..., 1]
    return constellation.points[idx]


def symbols_to_bits(symbols: np.ndarray,
                    constellation: Constellation) -> np.ndarray:
    """Inverse of bits_to_symbols for exact constellation points."""
    idx = np.argmin(np.abs(symbols[..., None] - constellation.points), axis=-1)
    return np.stack([(idx >> 1) & 1, idx & 1], axis=-1)
