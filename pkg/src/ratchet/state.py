"""Momentum-ladder wave functions and their angular-position profiles.

States live on the discrete momentum ladder p = n + beta (in two-photon
recoil units), where the integer part n changes under kicks and the
quasimomentum beta is conserved by every operation in this package.

The angular profile uses the synthesis

    phi(theta) = sum_n amps_n * exp(i n theta),      theta in [-pi, pi)

so multiplying the components by exp(-i n g) translates the density by +g.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-8
DEFAULT_GRID = 1024

# Densities whose max stays below this multiple of the min carry no peak.
FLATNESS_RATIO = 1.05


class NoPeakError(ValueError):
    """The profile is flat: no peak stands above the floor."""


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class LadderState:
    """Normalized amplitudes on the ladder sites n = n_min .. n_min+len-1.

    Instances are immutable; operations return new states.
    """

    beta: float
    n_min: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amps", _readonly(self.amps))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "n_min", int(self.n_min))
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"quasimomentum must lie in [0, 1), got {self.beta}")
        if self.amps.ndim != 1 or self.amps.size == 0:
            raise ValueError("amplitudes must form a non-empty 1-d array")
        norm = float(np.sum(np.abs(self.amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm!r}")

    @property
    def n_max(self) -> int:
        return self.n_min + self.amps.size - 1

    @property
    def width(self) -> int:
        """Number of ladder sites spanned by the amplitude array."""
        return self.amps.size

    def n_values(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + self.amps.size)

    def momenta(self) -> np.ndarray:
        return self.n_values() + self.beta

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))

    def amplitude(self, n: int) -> complex:
        """Amplitude on ladder site n (zero outside the stored window)."""
        if self.n_min <= n <= self.n_max:
            return complex(self.amps[n - self.n_min])
        return 0.0j

    def with_phase_slope(self, gamma: float) -> "LadderState":
        """Multiply each component by exp(-i n gamma).

        Equivalent to offsetting the kick potential by +gamma, and shifts
        the angular density by +gamma.
        """
        phases = np.exp(-1j * gamma * self.n_values())
        return LadderState(self.beta, self.n_min, self.amps * phases)

    def overlap(self, other: "LadderState") -> complex:
        """Inner product <self|other> over the union of the two windows."""
        lo = min(self.n_min, other.n_min)
        hi = max(self.n_max, other.n_max)
        a = np.zeros(hi - lo + 1, dtype=np.complex128)
        b = np.zeros_like(a)
        a[self.n_min - lo : self.n_min - lo + self.amps.size] = self.amps
        b[other.n_min - lo : other.n_min - lo + other.amps.size] = other.amps
        return complex(np.vdot(a, b))

    def fidelity(self, other: "LadderState") -> float:
        return abs(self.overlap(other)) ** 2

    def to_json(self) -> str:
        payload = {
            "beta": self.beta,
            "n_min": self.n_min,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LadderState":
        payload = json.loads(text)
        amps = np.array([complex(re, im) for re, im in payload["amps"]])
        return cls(payload["beta"], payload["n_min"], amps)

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path | str) -> "LadderState":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def plane_wave(n: int, beta: float = 0.5) -> LadderState:
    """Single ladder component |n>."""
    return LadderState(beta, n, np.ones(1, dtype=np.complex128))


def make_superposition(
    components: Iterable[tuple[int, float, float]], beta: float = 0.5
) -> LadderState:
    """Build a normalized superposition from (n, phase, weight) triples.

    Amplitudes are sqrt(weight) * exp(i phase); weights are relative
    populations and need not sum to one. Every listed n must be distinct,
    weights must be non-negative with at least one positive.
    """
    comps = list(components)
    if not comps:
        raise ValueError("superposition needs at least one component")
    ns = [int(n) for n, _, _ in comps]
    if len(set(ns)) != len(ns):
        raise ValueError(f"duplicate ladder indices in {sorted(ns)}")
    weights = np.array([float(w) for _, _, w in comps])
    if np.any(weights < 0):
        raise ValueError("component weights must be non-negative")
    total = weights.sum()
    if total <= 0:
        raise ValueError("all component weights are zero")
    n_min, n_max = min(ns), max(ns)
    amps = np.zeros(n_max - n_min + 1, dtype=np.complex128)
    for (n, phase, _), w in zip(comps, weights):
        amps[n - n_min] = np.sqrt(w / total) * np.exp(1j * float(phase))
    return LadderState(beta, n_min, amps)


def block_bounds(count: int) -> tuple[int, int]:
    """Ladder window [n_lo, n_hi] for a `count`-component ratchet state.

    Odd counts sit symmetrically about n = 0; even counts take one extra
    site on the positive side so the block always contains both 0 and 1.
    """
    if count < 1:
        raise ValueError("count must be positive")
    return -((count - 1) // 2), count // 2


def consecutive_state(
    n_lo: int, n_hi: int, gamma: float = 0.0, beta: float = 0.5
) -> LadderState:
    """Equal-weight superposition over n = n_lo .. n_hi with phases e^{-i n gamma}."""
    if n_hi < n_lo:
        raise ValueError("empty ladder window")
    return make_superposition(
        [(n, -n * gamma, 1.0) for n in range(n_lo, n_hi + 1)], beta=beta
    )


def ratchet_state(count: int, gamma: float = 0.0, beta: float = 0.5) -> LadderState:
    """Equal superposition of `count` neighbouring plane waves, phases e^{-i n gamma}."""
    n_lo, n_hi = block_bounds(count)
    return consecutive_state(n_lo, n_hi, gamma=gamma, beta=beta)


@dataclass(frozen=True, eq=False)
class SpatialProfile:
    """Angular density sampled on a uniform grid over [-pi, pi).

    gamma_ref records the standing-wave offset the profile was built
    against; it is bookkeeping only and does not enter the density.
    """

    theta: np.ndarray
    density: np.ndarray
    gamma_ref: float = 0.0

    def __post_init__(self) -> None:
        th = np.array(self.theta, dtype=float)
        th.setflags(write=False)
        de = np.array(self.density, dtype=float)
        de.setflags(write=False)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "density", de)
        if th.shape != de.shape or th.ndim != 1:
            raise ValueError("theta and density grids must match")

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.theta.size

    def integral(self) -> float:
        """Total probability by the periodic rectangle rule (exact here)."""
        return float(self.density.sum() * self.step)

    def csv_rows(self) -> list[tuple[float, float]]:
        return [(float(t), float(d)) for t, d in zip(self.theta, self.density)]

    def save_csv(self, path: Path | str) -> None:
        from . import report

        report.write_csv(path, ("theta", "density"), self.csv_rows())


def spatial_profile(
    state: LadderState, m: int = DEFAULT_GRID, gamma: float = 0.0
) -> SpatialProfile:
    """Angular density |sum_n a_n e^{i n theta}|^2 / 2pi on an m-point grid.

    Requires m >= 4 * ladder width for Nyquist margin. Quasimomentum
    contributes only a global phase and drops out of the density.
    """
    width = state.width
    if m < 4 * width:
        raise ValueError(f"grid of {m} points is too coarse for {width} ladder sites")
    theta = -np.pi + 2.0 * np.pi * np.arange(m) / m
    wave = np.exp(1j * np.outer(state.n_values(), theta))
    phi = state.amps @ wave
    density = np.abs(phi) ** 2 / (2.0 * np.pi)
    return SpatialProfile(theta, density, gamma_ref=gamma)


def fwhm(profile: SpatialProfile) -> float:
    """Full width at half maximum of the main peak, in radians.

    The half level is (max + min) / 2; crossings are located by linear
    interpolation, walking away from the global maximum with periodic
    wraparound. Raises NoPeakError when the profile is flat.
    """
    d = profile.density
    m = d.size
    top = float(d.max())
    floor = float(d.min())
    if top < FLATNESS_RATIO * floor:
        raise NoPeakError("density has no peak above the flat background")
    level = 0.5 * (top + floor)
    i0 = int(np.argmax(d))
    step = profile.step

    def _walk(direction: int) -> float:
        # distance from the peak to the half-level crossing, in radians
        prev = d[i0]
        for k in range(1, m):
            cur = d[(i0 + direction * k) % m]
            if cur < level:
                frac = (prev - level) / (prev - cur)
                return (k - 1 + frac) * step
            prev = cur
        raise NoPeakError("half level never crossed; profile effectively flat")

    return _walk(+1) + _walk(-1)
