"""Electron transmission and reflection off a contact-coupled spin-1/2 impurity.

The exchange interaction is diagonal in the total spin of electron plus
impurity, so the two channels scatter independently: channel 0 is the singlet
(total spin 0) and channel 1 the triplet (total spin 1).  Everything depends
on one dimensionless coupling

    g = pi * J * rho(E) / 4,        rho(E) = sqrt(2 m / E) / (pi hbar),

with rho(E) the linear density of states of the wire at the scattering energy,
plus, on the reflected side, the interference phase theta = 2 k |x| of the
probe point.

Channel couplings are alpha_0 = -3g/2 (singlet) and alpha_1 = +g/2 (triplet),
giving t = 1 / (1 + i alpha) and r = t - 1.  These satisfy |t|^2 + |r|^2 = 1
and Re(t) = |t|^2 identically.

Sign convention for the reflected side: amplitudes are evaluated in the phase
variable theta = 2k|x|, so the oscillatory cross terms enter as cos(theta) and
+sin(theta).  The canonical probe phase theta = pi/2 therefore has sin = +1;
detector positions on the physical x < 0 axis realizing the same amplitudes
sit at 2k|x| = 3pi/2 (mod 2pi).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

_SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class ScatteringParams:
    """Dimensionless coupling g, with the wavenumber k when positions matter.

    ``from_physical`` derives both from the magnetic coupling J, the electron
    energy E and mass m, and hbar.
    """

    g: float
    k: float | None = None

    def __post_init__(self) -> None:
        if self.g < 0:
            warnings.warn(
                "attractive coupling (g < 0): formulas remain valid but unitarity "
                "sweeps in this package only cover g >= 0",
                stacklevel=3,
            )
        if self.k is not None and self.k <= 0:
            raise ValueError(f"wavenumber k must be positive, got {self.k}")

    @classmethod
    def from_physical(
        cls, coupling: float, energy: float, mass: float, hbar: float = 1.0
    ) -> "ScatteringParams":
        if energy <= 0:
            raise ValueError(f"positive-energy scattering only, got E = {energy}")
        if mass <= 0 or hbar <= 0:
            raise ValueError("mass and hbar must be positive")
        dos = np.sqrt(2.0 * mass / energy) / (np.pi * hbar)
        g = np.pi * coupling * dos / 4.0
        k = np.sqrt(2.0 * mass * energy) / hbar
        return cls(g=float(g), k=float(k))


@dataclass(frozen=True)
class ScatteringCoefficients:
    """Transmission/reflection amplitudes per total-spin channel."""

    t0: complex
    t1: complex
    r0: complex
    r1: complex
    g: float

    @property
    def transmissions(self) -> tuple[complex, complex]:
        return self.t0, self.t1

    @property
    def reflections(self) -> tuple[complex, complex]:
        return self.r0, self.r1


def coefficients(params: ScatteringParams | float) -> ScatteringCoefficients:
    """Channel amplitudes t_i = 1/(1 + i alpha_i), r_i = t_i - 1."""
    g = float(params.g if isinstance(params, ScatteringParams) else ScatteringParams(float(params)).g)
    alpha0 = -1.5 * g
    alpha1 = 0.5 * g
    t0 = 1.0 / (1.0 + 1.0j * alpha0)
    t1 = 1.0 / (1.0 + 1.0j * alpha1)
    return ScatteringCoefficients(t0=t0, t1=t1, r0=t0 - 1.0, r1=t1 - 1.0, g=g)


def wavefunctions(
    params: ScatteringParams, x: float, side: str
) -> tuple[complex, complex]:
    """Spatial amplitudes (phi0, phi1) at position x.

    phi0 multiplies the singlet spin state and phi1 (with its sqrt(3)
    normalization) the symmetric triplet combination.  ``side`` must be
    consistent with the sign of x; x = 0 is evaluated as the transmitted-side
    limit.  The left side uses the |x| phase convention described in the
    module docstring.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if side == "left" and x >= 0:
        raise ValueError("side='left' requires x < 0 (x = 0 belongs to the right side)")
    if side == "right" and x < 0:
        raise ValueError("side='right' requires x >= 0")
    if params.k is None:
        raise ValueError("ScatteringParams.k is required to evaluate wavefunctions")
    c = coefficients(params)
    phase = params.k * abs(x)
    if side == "right":
        plane = np.exp(1.0j * phase)
        return c.t0 * plane, _SQRT3 * c.t1 * plane
    f0 = np.exp(1.0j * phase) + c.r0 * np.exp(-1.0j * phase)
    f1 = np.exp(1.0j * phase) + c.r1 * np.exp(-1.0j * phase)
    return f0, _SQRT3 * f1


def probe_amplitudes(
    coeffs: ScatteringCoefficients, side: str, phase: float
) -> np.ndarray:
    """Two-component amplitude vector (phi0, phi1) at probe phase theta = 2k|x|.

    The detection rates are quadratic forms in this vector; the common
    plane-wave factor on the transmitted side is kept for symmetry and
    cancels in every rate.
    """
    if side not in ("transmitted", "reflected"):
        raise ValueError(f"side must be 'transmitted' or 'reflected', got {side!r}")
    half = np.exp(0.5j * phase)
    if side == "transmitted":
        return np.array([coeffs.t0 * half, _SQRT3 * coeffs.t1 * half])
    f0 = half + coeffs.r0 * np.conj(half)
    f1 = half + coeffs.r1 * np.conj(half)
    return np.array([f0, _SQRT3 * f1])
