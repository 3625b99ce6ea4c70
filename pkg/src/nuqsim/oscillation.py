"""Two-flavor neutrino oscillations in matter: analytic oracles.

Units: energies in GeV, path lengths in km, matter densities in g/cm^3,
mass splittings in eV^2, angles in radians.  Flavor basis order is
(nu_e, nu_mu); a flavor rotation by angle t is the real matrix
[[cos t, -sin t], [sin t, cos t]] (the RY(2t) form, matching the gate
encoding used by the circuit builders so oracle and circuit amplitudes
agree entry by entry).

Three ground-truth probability oracles are provided:

- ``prob_constant_density``: closed form sin^2(2 theta_m) sin^2(phi/2)
  for a single uniform layer;
- ``prob_slab``: ordered product of per-layer 2x2 propagators
  R(theta_m) diag(e^{-i phi/2}, e^{i phi/2}) R(theta_m)^T for a
  piecewise-constant profile;
- ``prob_msw_adiabatic``: phase-averaged survival probability
  (1 + cos 2theta cos 2theta_m)/2 for adiabatic propagation from a
  dense production point to vacuum.

The two unit-conversion factors are derived once from CODATA constants
(Fermi coupling, neutron mass, hbar*c) and self-checked at import:

- matter term  A = matter_factor * Ye * rho * E,
  matter_factor = 2 sqrt(2) G_F (hbar c)^3 / m_n ~ 1.5134e-4 eV^2 per
  (g/cm^3 * GeV);
- oscillation phase  phi = phase_factor * dm2 * dx / E,
  phase_factor = 1 km / (2 hbar c) ~ 2.5339 rad GeV / (eV^2 km).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.constants as _sc


class NumericalDomainError(ArithmeticError):
    """A physics quantity left its mathematically valid domain."""


@dataclass(frozen=True)
class PhysConstants:
    """Unit-conversion factors, derived once and frozen."""

    gf_gev2: float          # Fermi coupling, GeV^-2
    mn_g: float             # nucleon (neutron) mass, g
    hbarc_gev_cm: float     # hbar*c, GeV*cm
    matter_factor: float    # eV^2 per (g/cm^3 * GeV)
    phase_factor: float     # rad*GeV per (eV^2 * km)

    @classmethod
    def derive(cls) -> "PhysConstants":
        gf = _sc.physical_constants["Fermi coupling constant"][0]
        mn_g = _sc.m_n * 1e3
        hbarc = (_sc.hbar * _sc.c / _sc.e) * 1e-9 * 1e2  # J*m -> GeV*cm
        matter = 2.0 * math.sqrt(2.0) * gf * hbarc ** 3 / mn_g * 1e18
        phase = 1e-18 * (1e5 / hbarc) / 2.0
        return cls(gf, mn_g, hbarc, matter, phase)


CONSTANTS = PhysConstants.derive()

# import-time self-check against independently hand-derived anchors;
# loose enough to survive CODATA revisions, tight enough to catch unit slips
assert abs(CONSTANTS.matter_factor / 1.51338e-4 - 1.0) < 1e-4
assert abs(CONSTANTS.phase_factor / 2.5338654 - 1.0) < 1e-4


@dataclass(frozen=True)
class OscParams:
    """Vacuum mixing angle (rad) and mass splitting (eV^2)."""

    theta: float
    dm2: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must be in [0, pi/2], got {self.theta}")
        if self.dm2 <= 0.0:
            raise ValueError(f"dm2 must be positive, got {self.dm2}")


@dataclass(frozen=True)
class MatterLayer:
    """Constant-density layer: rho (g/cm^3), Ye, length (km)."""

    rho: float
    ye: float
    length_km: float

    def __post_init__(self):
        if self.rho < 0.0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        if not 0.0 < self.ye <= 1.0:
            raise ValueError(f"ye must be in (0, 1], got {self.ye}")
        if self.length_km < 0.0:
            raise ValueError(f"length_km must be >= 0, got {self.length_km}")


@dataclass(frozen=True)
class SlabProfile:
    """Ordered constant-density layers, optionally one period repeated.

    With ``period_count`` set, ``layers`` holds a single period (even
    length) and the physical profile is that period repeated
    ``period_count`` times.
    """

    layers: tuple[MatterLayer, ...]
    period_count: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError("profile needs at least one layer")
        if self.period_count is not None:
            if self.period_count < 1:
                raise ValueError("period_count must be >= 1")
            if len(self.layers) % 2:
                raise ValueError("a periodic profile needs an even layer count")

    def expanded(self) -> tuple[MatterLayer, ...]:
        if self.period_count is None:
            return self.layers
        return self.layers * self.period_count


@dataclass(frozen=True)
class EffectiveParams:
    """Matter-modified mixing angle and splitting for one layer."""

    theta_m: float      # rad, in [0, pi/2]
    dm2_m: float        # eV^2
    beta: float         # A / dm2
    a_ev2: float        # matter term A


def matter_potential(layer: MatterLayer, energy_gev: float) -> float:
    """Matter term A = 2 sqrt(2) G_F Ye rho E / m_n, in eV^2."""
    if energy_gev <= 0.0:
        raise ValueError(f"energy must be positive, got {energy_gev}")
    return CONSTANTS.matter_factor * layer.ye * layer.rho * energy_gev


def effective_params_from_beta(p: OscParams, beta: float) -> EffectiveParams:
    """Effective angle and splitting at a given beta = A/dm2.

    sin 2theta_m = sin 2theta / sqrt((cos 2theta - beta)^2 + sin^2 2theta),
    with theta_m placed in [0, pi/2] so that cos 2theta_m carries the
    sign of (cos 2theta - beta): above resonance theta_m > pi/4.
    dm2_m = dm2 * sqrt((cos 2theta - beta)^2 + sin^2 2theta).
    """
    s2 = math.sin(2.0 * p.theta)
    c2 = math.cos(2.0 * p.theta)
    root = math.hypot(c2 - beta, s2)
    if root == 0.0:
        raise NumericalDomainError(
            "theta_m undefined: beta = cos 2theta with sin 2theta = 0")
    theta_m = 0.5 * math.atan2(s2, c2 - beta)
    return EffectiveParams(theta_m=theta_m, dm2_m=p.dm2 * root,
                           beta=beta, a_ev2=beta * p.dm2)


def effective_params(p: OscParams, layer: MatterLayer,
                     energy_gev: float) -> EffectiveParams:
    a = matter_potential(layer, energy_gev)
    return effective_params_from_beta(p, a / p.dm2)


def phase(dm2_m: float, length_km: float, energy_gev: float) -> float:
    """Oscillation phase phi = dm2_m * dx / (2E), in radians."""
    if energy_gev <= 0.0:
        raise ValueError(f"energy must be positive, got {energy_gev}")
    if length_km < 0.0:
        raise ValueError(f"length must be >= 0, got {length_km}")
    return CONSTANTS.phase_factor * dm2_m * length_km / energy_gev


def mixing_rotation(theta: float) -> np.ndarray:
    """Flavor rotation [[cos t, -sin t], [sin t, cos t]] (= RY(2t))."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def phase_rotation(phi: float) -> np.ndarray:
    """Mass-basis evolution diag(e^{-i phi/2}, e^{i phi/2}) (= RZ(phi))."""
    return np.array([[np.exp(-0.5j * phi), 0], [0, np.exp(0.5j * phi)]])


def layer_propagator(theta_m: float, phi: float) -> np.ndarray:
    """Flavor-basis propagator R(theta_m) P(phi) R(theta_m)^T for one layer."""
    r = mixing_rotation(theta_m)
    return r @ phase_rotation(phi) @ r.T


def atmospheric_effective_angle(theta23: float, theta13_m: float) -> float:
    """Effective two-flavor angle arcsin(sin theta23 * sin 2theta13_m)."""
    return math.asin(math.sin(theta23) * math.sin(2.0 * theta13_m))


def slab_layer_params(p: OscParams, profile: SlabProfile, energy_gev: float,
                      theta23: float | None = None
                      ) -> list[tuple[float, float]]:
    """Per-layer (rotation angle, phase) pairs for a profile.

    With ``theta23`` given, the per-layer angle is the atmospheric
    effective angle built from the matter-modified theta; otherwise the
    plain matter angle theta_m is used.  The phase always comes from
    the matter-modified splitting.
    """
    out = []
    for layer in profile.expanded():
        ep = effective_params(p, layer, energy_gev)
        phi = phase(ep.dm2_m, layer.length_km, energy_gev)
        ang = ep.theta_m if theta23 is None else \
            atmospheric_effective_angle(theta23, ep.theta_m)
        out.append((ang, phi))
    return out


def prob_constant_density(p: OscParams, layer: MatterLayer, energy_gev: float,
                          length_km: float) -> float:
    """P(nu_mu -> nu_e) after one uniform layer: sin^2 2theta_m sin^2(phi/2)."""
    ep = effective_params(p, layer, energy_gev)
    phi = phase(ep.dm2_m, length_km, energy_gev)
    return math.sin(2.0 * ep.theta_m) ** 2 * math.sin(0.5 * phi) ** 2


_FLAVOR_INDEX = {"e": 0, "mu": 1}


def prob_slab(p: OscParams, profile: SlabProfile, energy_gev: float,
              initial: str = "mu", theta23: float | None = None) -> float:
    """P(initial -> nu_e) through a piecewise-constant profile.

    Multiplies the exact per-layer 2x2 propagators in order and returns
    the squared nu_e amplitude.
    """
    try:
        idx = _FLAVOR_INDEX[initial]
    except KeyError:
        raise ValueError(f"initial flavor must be 'e' or 'mu', got {initial!r}")
    v = np.zeros(2, dtype=complex)
    v[idx] = 1.0
    for theta_k, phi_k in slab_layer_params(p, profile, energy_gev, theta23):
        v = layer_propagator(theta_k, phi_k) @ v
    return float(abs(v[0]) ** 2)


def msw_survival_from_angles(theta: float, theta_m: float) -> float:
    """Adiabatic, phase-averaged P(nu_e -> nu_e) from the two angles."""
    return 0.5 * (1.0 + math.cos(2.0 * theta) * math.cos(2.0 * theta_m))


def prob_msw_adiabatic(p: OscParams, production_layer: MatterLayer,
                       energy_gev: float) -> tuple[float, float]:
    """(P_ee, P_emu) for adiabatic propagation from a dense production point.

    theta_m is evaluated at the production layer; the phase information
    is averaged out, so probabilities (not amplitudes) combine.
    """
    ep = effective_params(p, production_layer, energy_gev)
    pee = msw_survival_from_angles(p.theta, ep.theta_m)
    return pee, 1.0 - pee
