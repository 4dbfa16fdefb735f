"""Closed-form single-excitation amplitudes for the balanced-coupling circuits.

These expressions solve the two-site chain exactly (starting from a single
excitation on the first NVCE) and serve as the independent oracle for the
numerical integrators:

* resonant chain NE1 - q1 - bus - q2 - NE2 with equal couplings g and J,
  eigenfrequencies {0, +-J, +-sqrt(J^2 + 2 g^2)};
* dispersive chain NE1 - q1 - q2 - NE2 with Stark shift lambda, exchange
  lambda and NVCE coupling J, eigenfrequencies {+-J, lambda +- kappa} where
  kappa = sqrt(lambda^2 + J^2).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateParametersError, NormalizationError

__all__ = [
    "ResonantCoefficients",
    "DispersiveCoefficients",
    "LimitCase",
    "resonant_coefficients",
    "dispersive_coefficients",
    "limit_case",
    "transfer_fidelity",
]


@dataclass(frozen=True)
class ResonantCoefficients:
    """Amplitudes (C1..C5) on (NE1, q1, q2, bus, NE2) at one instant."""

    c1: complex
    c2: complex
    c3: complex
    c4: complex
    c5: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5])

    def populations(self) -> np.ndarray:
        return np.abs(self.as_array()) ** 2


@dataclass(frozen=True)
class DispersiveCoefficients:
    """Amplitudes (D1..D4) on (NE1, q1, q2, NE2) at one instant."""

    d1: complex
    d2: complex
    d3: complex
    d4: complex
    rabi_kappa: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.d3, self.d4])

    def populations(self) -> np.ndarray:
        return np.abs(self.as_array()) ** 2


def resonant_coefficients(t: float, g: float, J: float) -> ResonantCoefficients:
    """Exact resonant-chain amplitudes for equal couplings, initial C1 = 1."""
    if g < 0 or J < 0:
        raise ValueError("couplings must be >= 0")
    if g == 0 and J == 0:
        raise DegenerateParametersError("g = J = 0 leaves no dynamics to solve")
    s2 = J * J + 2.0 * g * g
    omega = math.sqrt(s2)
    cos_j, sin_j = math.cos(J * t), math.sin(J * t)
    cos_o, sin_o = math.cos(omega * t), math.sin(omega * t)
    c1 = g * g / s2 + 0.5 * cos_j + J * J / (2.0 * s2) * cos_o
    c2 = -0.5j * sin_j - 1j * J / (2.0 * omega) * sin_o
    c3 = 0.5j * sin_j - 1j * J / (2.0 * omega) * sin_o
    c4 = -J * g / s2 + J * g / s2 * cos_o
    c5 = g * g / s2 - 0.5 * cos_j + J * J / (2.0 * s2) * cos_o
    return ResonantCoefficients(c1, c2, c3, c4, c5)


def dispersive_coefficients(t: float, lam: float, J: float) -> DispersiveCoefficients:
    """Exact dispersive-chain amplitudes for equal couplings, initial D1 = 1."""
    if J <= 0:
        raise DegenerateParametersError(
            "J must be > 0: kappa = lambda makes a denominator vanish at J = 0"
        )
    if lam <= 0:
        raise DegenerateParametersError(
            "lambda must be > 0; for lambda = 0 the chain is two decoupled "
            "qubit-NVCE pairs -- use the resonant solution instead"
        )
    kappa = math.sqrt(lam * lam + J * J)
    dplus = 4.0 * (kappa * kappa + lam * kappa)
    dminus = 4.0 * (kappa * kappa - lam * kappa)
    ep = np.exp(-1j * (lam + kappa) * t)
    em = np.exp(-1j * (lam - kappa) * t)
    sym = J * J / dplus * ep + J * J / dminus * em
    anti_q = J * (lam + kappa) / dplus * ep + J * (lam - kappa) / dminus * em
    cos_j, sin_j = math.cos(J * t), math.sin(J * t)
    d1 = sym + 0.5 * cos_j
    d2 = anti_q - 0.5j * sin_j
    d3 = anti_q + 0.5j * sin_j
    d4 = sym - 0.5 * cos_j
    return DispersiveCoefficients(d1, d2, d3, d4, kappa)


class LimitCase(enum.Enum):
    EQUILIBRIUM = "equilibrium"  # g = J
    STRONG_MAGNETIC = "strong_magnetic"  # J >> g
    STRONG_INDUCTANCE = "strong_inductance"  # J << g


def limit_case(which: LimitCase, t: float, g: float, J: float) -> tuple[complex, complex]:
    """(C1, C5) in the three coupling regimes of the resonant chain.

    EQUILIBRIUM evaluates the g = J reduction; STRONG_INDUCTANCE the J << g
    two-level reduction (1 +- cos Jt)/2.  STRONG_MAGNETIC has no simpler
    closed form, so the full expressions are returned; the J/g -> infinity
    statement that C5 vanishes is asymptotic only.  Parameters outside the
    nominal regime produce a warning, not an error.
    """
    if which is LimitCase.EQUILIBRIUM:
        if not math.isclose(g, J, rel_tol=1e-9):
            warnings.warn(f"EQUILIBRIUM limit assumes g = J; got g={g}, J={J}")
        c1 = 1.0 / 3.0 + 0.5 * math.cos(J * t) + math.cos(math.sqrt(3.0) * J * t) / 6.0
        c5 = 1.0 / 3.0 - 0.5 * math.cos(J * t) + math.cos(math.sqrt(3.0) * J * t) / 6.0
        return complex(c1), complex(c5)
    if which is LimitCase.STRONG_INDUCTANCE:
        if J > 0.2 * g:
            warnings.warn(f"STRONG_INDUCTANCE limit assumes J << g; got J/g = {J / g:g}")
        cos_j = math.cos(J * t)
        return complex(0.5 + 0.5 * cos_j), complex(0.5 - 0.5 * cos_j)
    if which is LimitCase.STRONG_MAGNETIC:
        if J < 5.0 * g:
            warnings.warn(f"STRONG_MAGNETIC regime assumes J >> g; got J/g = {J / g:g}")
        coeffs = resonant_coefficients(t, g, J)
        return coeffs.c1, coeffs.c5
    raise ValueError(f"unknown limit case {which!r}")


def _check_encoding(alpha: complex, beta: complex):
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > 1e-9:
        raise NormalizationError(
            f"|alpha|^2 + |beta|^2 = {norm2!r} deviates from 1 beyond 1e-9"
        )


def transfer_fidelity(
    mode: str, t: float, couplings: tuple[float, float], alpha: complex, beta: complex
) -> float:
    """Transfer fidelity |alpha|^2 + |beta * C_target(t)|^2 from the closed forms.

    ``mode`` is ``"resonant"`` (couplings = (g, J), target amplitude C5) or
    ``"dispersive"`` (couplings = (lambda, J), target amplitude D4).
    """
    _check_encoding(alpha, beta)
    if mode == "resonant":
        g, J = couplings
        target = resonant_coefficients(t, g, J).c5
    elif mode == "dispersive":
        lam, J = couplings
        target = dispersive_coefficients(t, lam, J).d4
    else:
        raise ValueError(f"mode must be 'resonant' or 'dispersive', got {mode!r}")
    return abs(alpha) ** 2 + abs(beta * target) ** 2
