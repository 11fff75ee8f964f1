"""Ratchet observables: momentum moments, dispersion, effective force.

The effective force is the density-weighted standing-wave gradient

    F_eff = | integral density(theta) * (-sin theta) dtheta |

evaluated by the rectangle rule, which is exact on a uniform periodic grid
for the band-limited densities produced here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .state import (
    DEFAULT_GRID,
    LadderState,
    SpatialProfile,
    make_superposition,
    spatial_profile,
)

VARIANCE_FLOOR = 1e-12


class UndefinedDispersionError(ValueError):
    """Initial momentum variance vanishes; D(t) has no meaning."""


def mean_momentum(state: LadderState) -> float:
    return float(np.sum(state.probabilities() * state.momenta()))


def mean_momentum_squared(state: LadderState) -> float:
    return float(np.sum(state.probabilities() * state.momenta() ** 2))


def momentum_variance(state: LadderState) -> float:
    return mean_momentum_squared(state) - mean_momentum(state) ** 2


@dataclass(frozen=True, eq=False)
class RatchetTrace:
    """Momentum statistics along a kick train; index t counts kicks."""

    t: np.ndarray
    mean_p: np.ndarray
    mean_p2: np.ndarray
    dispersion: np.ndarray

    def __post_init__(self) -> None:
        for name in ("t", "mean_p", "mean_p2", "dispersion"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def csv_rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (int(t), float(p), float(p2), float(d))
            for t, p, p2, d in zip(self.t, self.mean_p, self.mean_p2, self.dispersion)
        ]


def dispersion_trace(states: Sequence[LadderState]) -> RatchetTrace:
    """Build the trace D(t) = var_p(t) / var_p(0) from evolved snapshots.

    Raises UndefinedDispersionError when the initial variance is zero, as
    for a single plane wave.
    """
    if not states:
        raise ValueError("empty state sequence")
    var0 = momentum_variance(states[0])
    if var0 < VARIANCE_FLOOR:
        raise UndefinedDispersionError(
            "initial momentum variance vanishes, dispersion undefined"
        )
    mean_p = np.array([mean_momentum(s) for s in states])
    mean_p2 = np.array([mean_momentum_squared(s) for s in states])
    var = mean_p2 - mean_p**2
    return RatchetTrace(
        t=np.arange(len(states)),
        mean_p=mean_p,
        mean_p2=mean_p2,
        dispersion=var / var0,
    )


def effective_force_signed(profile: SpatialProfile) -> float:
    """Signed density-weighted gradient of cos(theta)."""
    return float(np.sum(profile.density * (-np.sin(profile.theta))) * profile.step)


def effective_force(profile: SpatialProfile) -> float:
    """Magnitude of the density-weighted standing-wave gradient."""
    return abs(effective_force_signed(profile))


def effective_force_missing_state(
    n_lo: int,
    n_hi: int,
    missing: int,
    gamma: float,
    m: int = DEFAULT_GRID,
) -> float:
    """F_eff for an equal superposition over [n_lo, n_hi] with one site removed.

    The removed site must lie strictly inside the window; dropping an
    endpoint would just shrink the window.
    """
    if n_hi <= n_lo:
        raise ValueError("window must span at least two sites")
    if not n_lo < missing < n_hi:
        raise ValueError(f"missing site {missing} is not interior to [{n_lo}, {n_hi}]")
    comps = [
        (n, -n * gamma, 1.0) for n in range(n_lo, n_hi + 1) if n != missing
    ]
    state = make_superposition(comps, beta=0.5)
    return effective_force(spatial_profile(state, m=m, gamma=gamma))
