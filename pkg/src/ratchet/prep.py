"""Bragg-pulse state preparation.

A Bragg pulse couples one adjacent ladder pair (n_a, n_b) = (n, n+1)
through the two-level rotation

    a'_a = cos(A/2) a_a - i sin(A/2) e^{+i gamma_b} a_b
    a'_b = -i sin(A/2) e^{-i gamma_b} a_a + cos(A/2) a_b

with pulse area A. Plans chain pulses outward from |0> to sculpt a target
superposition; areas follow from backward induction on the population that
each outward transfer must carry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .state import LadderState, make_superposition, plane_wave

FIDELITY_FLOOR = 1.0 - 1e-9


@dataclass(frozen=True)
class BraggPulse:
    """One two-level pulse on the adjacent pair (n_a, n_b) = (n, n+1)."""

    n_a: int
    n_b: int
    area: float
    gamma_b: float = 0.0

    def __post_init__(self) -> None:
        if self.n_b != self.n_a + 1:
            raise ValueError("pulse must couple an adjacent pair, ordered (n, n+1)")
        if not 0.0 <= self.area <= 2.0 * math.pi:
            raise ValueError(f"pulse area {self.area} outside [0, 2 pi]")

    @property
    def p_res(self) -> float:
        """Resonant momentum of the pair, halfway between the two sites."""
        return 0.5 * (self.n_a + self.n_b)

    def matrix(self) -> np.ndarray:
        """2x2 unitary in the (n_a, n_b) basis."""
        c = math.cos(0.5 * self.area)
        s = math.sin(0.5 * self.area)
        g = self.gamma_b
        return np.array(
            [
                [c, -1j * s * np.exp(1j * g)],
                [-1j * s * np.exp(-1j * g), c],
            ]
        )

    def inverse(self) -> "BraggPulse":
        """Pulse undoing this one: same area, gamma_b advanced by pi."""
        return BraggPulse(self.n_a, self.n_b, self.area, self.gamma_b + math.pi)

    def as_dict(self) -> dict:
        return {
            "n_a": self.n_a,
            "n_b": self.n_b,
            "area": self.area,
            "gamma_b": self.gamma_b,
            "p_res": self.p_res,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BraggPulse":
        pulse = cls(d["n_a"], d["n_b"], d["area"], d["gamma_b"])
        if "p_res" in d and d["p_res"] != pulse.p_res:
            raise ValueError("stored p_res disagrees with the coupled pair")
        return pulse


def apply_bragg(state: LadderState, pulse: BraggPulse) -> LadderState:
    """Apply one pulse, widening the ladder window if the pair falls outside."""
    lo = min(state.n_min, pulse.n_a)
    hi = max(state.n_max, pulse.n_b)
    amps = np.zeros(hi - lo + 1, dtype=np.complex128)
    amps[state.n_min - lo : state.n_min - lo + state.width] = state.amps
    ia, ib = pulse.n_a - lo, pulse.n_b - lo
    amps[[ia, ib]] = pulse.matrix() @ amps[[ia, ib]]
    return LadderState(state.beta, lo, amps)


@dataclass(frozen=True)
class BraggPlan:
    """Ordered pulse sequence steering pure |0> into a target superposition."""

    pulses: tuple[BraggPulse, ...]
    target: LadderState

    def apply(self, state: LadderState) -> LadderState:
        for pulse in self.pulses:
            state = apply_bragg(state, pulse)
        return state

    def simulate(self) -> LadderState:
        """Run the plan from pure |0> at the target's quasimomentum."""
        return self.apply(plane_wave(0, beta=self.target.beta))

    def fidelity(self) -> float:
        return self.simulate().fidelity(self.target)

    def to_json(self) -> str:
        payload = {
            "pulses": [p.as_dict() for p in self.pulses],
            "target": json.loads(self.target.to_json()),
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BraggPlan":
        payload = json.loads(text)
        pulses = tuple(BraggPulse.from_dict(d) for d in payload["pulses"])
        target = LadderState.from_json(json.dumps(payload["target"]))
        return cls(pulses, target)

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path | str) -> "BraggPlan":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _transfer_order(n_lo: int, n_hi: int) -> list[tuple[int, int]]:
    """Outward (source, destination) chain: 0->1, 0->-1, 1->2, -1->-2, ..."""
    moves: list[tuple[int, int]] = []
    pos, neg = 1, -1
    while pos <= n_hi or neg >= n_lo:
        if pos <= n_hi:
            moves.append((pos - 1, pos))
            pos += 1
        if neg >= n_lo:
            moves.append((neg + 1, neg))
            neg -= 1
    return moves


def plan_superposition(
    populations: dict[int, float], gamma: float = 0.0, beta: float = 0.5
) -> BraggPlan:
    """Pulse plan reaching the given ladder populations with phases e^{-i n gamma}.

    Keys must form a consecutive window containing 0. Each outward move
    transfers the full population still owed beyond it, so the fraction for
    move (s -> d) is (mass at and past d) / (current mass at s); the area is
    2 arcsin(sqrt(fraction)). gamma_b imprints one step of the phase ramp:
    gamma - pi/2 on upward moves, gamma + pi/2 on downward ones.
    """
    ns = sorted(populations)
    n_lo, n_hi = ns[0], ns[-1]
    if ns != list(range(n_lo, n_hi + 1)) or 0 not in populations:
        raise ValueError("populations must cover a consecutive window containing 0")
    total = sum(populations.values())
    if total <= 0 or any(w < 0 for w in populations.values()):
        raise ValueError("populations must be non-negative with positive total")
    frac = {n: populations[n] / total for n in ns}

    def owed(dest: int) -> float:
        if dest > 0:
            return sum(frac[n] for n in range(dest, n_hi + 1))
        return sum(frac[n] for n in range(n_lo, dest + 1))

    pulses: list[BraggPulse] = []
    available = {n: 0.0 for n in ns}
    available[0] = 1.0
    for src, dst in _transfer_order(n_lo, n_hi):
        need = owed(dst)
        have = available[src]
        if need == 0.0:
            continue
        if have <= 0 or need > have * (1 + 1e-12):
            raise ValueError("transfer chain cannot supply the requested population")
        ratio = min(1.0, need / have)
        area = 2.0 * math.asin(math.sqrt(ratio))
        if dst > src:
            pulses.append(BraggPulse(src, dst, area, gamma - 0.5 * math.pi))
        else:
            pulses.append(BraggPulse(dst, src, area, gamma + 0.5 * math.pi))
        available[dst] = need
        available[src] = have - need

    target = make_superposition(
        [(n, -n * gamma, frac[n]) for n in ns if frac[n] > 0], beta=beta
    )
    plan = BraggPlan(tuple(pulses), target)
    if plan.fidelity() < FIDELITY_FLOOR:
        raise RuntimeError("planned pulse train misses its target state")
    return plan


def plan_equal_superposition(
    count: int, gamma: float = 0.0, centered: bool = True, beta: float = 0.5
) -> BraggPlan:
    """Plan for an equal 1/N superposition of `count` adjacent plane waves.

    count must lie in 2..9. Centered plans use the window around 0 (odd
    counts symmetric, even counts one extra site above); uncentered plans
    build upward over 0..count-1.
    """
    if not 2 <= count <= 9:
        raise ValueError("count must be between 2 and 9")
    if centered:
        n_lo, n_hi = -((count - 1) // 2), count // 2
    else:
        n_lo, n_hi = 0, count - 1
    populations = {n: 1.0 for n in range(n_lo, n_hi + 1)}
    return plan_superposition(populations, gamma=gamma, beta=beta)
