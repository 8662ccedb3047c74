"""Per-iteration scalar schedules: the spectral coefficient and the forcing term."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Array, SolverConfig, norm2


@dataclass
class SpectralState:
    """Previous accepted iterate and its residual; both None before the
    first update."""

    prev_x: Array | None = None
    prev_F: Array | None = None

    def update(self, x: Array, F: Array) -> None:
        self.prev_x = x
        self.prev_F = F


@dataclass(frozen=True)
class EtaSchedule:
    """Summable forcing sequence eta_k = 2^-k * eta0 with
    eta0 = min(||F(x0)||/2, sqrt(||F(x0)||))."""

    eta0: float

    @classmethod
    def from_initial_residual(cls, norm_f0: float) -> "EtaSchedule":
        return cls(min(0.5 * norm_f0, math.sqrt(norm_f0)))

    def eta(self, k: int) -> float:
        return math.ldexp(self.eta0, -k)


def sigma_k(state: SpectralState, x: Array, F: Array, cfg: SolverConfig) -> float:
    """Safeguarded spectral step coefficient.

    When a previous iterate exists, the spectral value s's / s'y (with
    s = x - prev_x, y = F - prev_F) is returned unchanged whenever
    |sigma| lies in [sigma_min, min(1, sigma_max)].  Otherwise, and always
    at the first iteration, the fallback max(sigma_min,
    min(||x|| / ||F||, sigma_max)) is used, with ||x|| replaced by 1 when
    the current point is the origin.
    """
    if state.prev_x is not None:
        s = x - state.prev_x
        y = F - state.prev_F
        sty = float(s @ y)
        if sty != 0.0:
            sigma_spg = float(s @ s) / sty
            if cfg.sigma_min <= abs(sigma_spg) <= min(1.0, cfg.sigma_max):
                return sigma_spg
    rho = norm2(x)
    if rho == 0.0:
        rho = 1.0
    return max(cfg.sigma_min, min(rho / norm2(F), cfg.sigma_max))
