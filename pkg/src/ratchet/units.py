"""Laboratory units for the pulsed standing-wave drive.

Two beams crossing at 2 * beam_angle build a grating with wave number
G = 2 (2 pi / lambda) sin(beam_angle). The natural clock is the
half-Talbot time T_half = 2 pi M / (hbar G^2); a pulse period T maps to
the dimensionless tau = 2 pi T / T_half, so T = T_half gives tau = 2 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import hbar

RB87_MASS_KG = 1.44316e-25


@dataclass(frozen=True)
class LabUnits:
    wavelength_nm: float = 780.0
    beam_angle_deg: float = 53.0
    atom_mass_kg: float = RB87_MASS_KG

    def __post_init__(self) -> None:
        if self.wavelength_nm <= 0 or self.atom_mass_kg <= 0:
            raise ValueError("wavelength and mass must be positive")
        if not 0 < self.beam_angle_deg <= 90:
            raise ValueError("beam angle must lie in (0, 90] degrees")

    @property
    def grating_vector(self) -> float:
        """Standing-wave wave number G in 1/m."""
        k = 2.0 * math.pi / (self.wavelength_nm * 1e-9)
        return 2.0 * k * math.sin(math.radians(self.beam_angle_deg))

    @property
    def half_talbot_time(self) -> float:
        """T_half in seconds."""
        g = self.grating_vector
        return 2.0 * math.pi * self.atom_mass_kg / (hbar * g * g)

    def scaled_period(self, period_s: float) -> float:
        """Dimensionless tau for a lab pulse period in seconds."""
        return 2.0 * math.pi * period_s / self.half_talbot_time

    def period_for(self, tau: float) -> float:
        """Lab pulse period in seconds realizing the given tau."""
        return tau * self.half_talbot_time / (2.0 * math.pi)
