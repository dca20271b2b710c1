"""Sheet and bulk material models: graphene intraband conductivity and Drude metals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CONSTANTS, PhysicalConstants

EV = CONSTANTS.e  # joules per electron-volt
DEFAULT_TEMPERATURE = 300.0
DEFAULT_T_G = 0.5e-9


@dataclass(frozen=True)
class GrapheneParams:
    """Doped graphene. ``mu`` in joules; use :meth:`from_ev` for eV input."""

    mu: float
    tau: float
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self):
        if not (self.mu > 0 and self.tau > 0 and self.temperature > 0):
            raise ValueError("graphene parameters need mu > 0, tau > 0, temperature > 0")

    @classmethod
    def from_ev(cls, mu_ev: float, tau: float,
                temperature: float = DEFAULT_TEMPERATURE) -> "GrapheneParams":
        return cls(mu=mu_ev * EV, tau=tau, temperature=temperature)

    @property
    def mu_ev(self) -> float:
        return self.mu / EV


@dataclass(frozen=True)
class DrudeParams:
    """Free-electron metal given by electron density ``nu`` or plasma frequency."""

    tau: float
    nu: float | None = None
    omega_p: float | None = None

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("Drude relaxation time must be positive")
        if self.nu is None and self.omega_p is None:
            raise ValueError("Drude model needs nu or omega_p")
        if self.nu is not None and not self.nu > 0:
            raise ValueError("electron density must be positive")
        if self.omega_p is not None and not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")
        if self.nu is not None and self.omega_p is not None:
            wp2 = _plasma_sq(self.nu, CONSTANTS)
            if abs(wp2 - self.omega_p**2) > 1e-12 * wp2:
                raise ValueError("nu and omega_p are inconsistent")

    def plasma_frequency_sq(self, consts: PhysicalConstants = CONSTANTS) -> float:
        if self.omega_p is not None:
            return self.omega_p**2
        return _plasma_sq(self.nu, consts)


def _plasma_sq(nu, consts):
    return nu * consts.e**2 / (consts.m_e * consts.eps0)


def graphene_sigma_full(p: GrapheneParams, omega, consts: PhysicalConstants = CONSTANTS):
    """Intraband sheet conductance (S) at finite temperature."""
    omega = _positive(omega)
    kT = consts.k_B * p.temperature
    x = p.mu / kT
    bracket = x + 2.0 * math.log1p(math.exp(-x))
    return 1j * consts.e**2 * kT / (np.pi * consts.hbar**2 * (omega + 1j / p.tau)) * bracket


def graphene_sigma_intra(p: GrapheneParams, omega, consts: PhysicalConstants = CONSTANTS):
    """Degenerate (mu >> k_B T) limit of :func:`graphene_sigma_full`.

    Uses hbar**2 in the denominator; this is the form that is dimensionally a
    conductance and that the finite-temperature expression tends to.
    """
    omega = _positive(omega)
    return 1j * consts.e**2 * p.mu / (np.pi * consts.hbar**2 * (omega + 1j / p.tau))


def equivalent_epsilon(sigma, omega, t_g: float = DEFAULT_T_G,
                       consts: PhysicalConstants = CONSTANTS):
    """Relative permittivity of a slab of thickness ``t_g`` standing in for a sheet."""
    if not t_g > 0:
        raise ValueError("effective thickness must be positive")
    omega = _positive(omega)
    return 1.0 + 1j * sigma / (omega * consts.eps0 * t_g)


def drude_epsilon(p: DrudeParams, omega, consts: PhysicalConstants = CONSTANTS):
    omega = _positive(omega)
    return 1.0 - p.plasma_frequency_sq(consts) / (omega * (omega + 1j / p.tau))


def drude_sigma(p: DrudeParams, omega, consts: PhysicalConstants = CONSTANTS):
    """Bulk Drude conductivity (S/m); the unit tensor is taken as the identity."""
    omega = _positive(omega)
    if p.nu is not None:
        return 1j * p.nu * consts.e**2 / (consts.m_e * (omega + 1j / p.tau))
    return 1j * consts.eps0 * p.omega_p**2 / (omega + 1j / p.tau)


def drude_from_epsilon(eps_rel: complex, omega: float,
                       consts: PhysicalConstants = CONSTANTS) -> DrudeParams:
    """Drude parameters reproducing ``eps_rel`` at ``omega``.

    Requires Re(eps) < 1 and Im(eps) > 0 (a passive metal-like value).
    """
    a = 1.0 - eps_rel.real
    b = eps_rel.imag
    if not (a > 0 and b > 0):
        raise ValueError("need Re(eps) < 1 and Im(eps) > 0 for a Drude fit")
    gamma = omega * b / a
    wp2 = omega**2 * (a + b * b / a)
    return DrudeParams(tau=1.0 / gamma, omega_p=math.sqrt(wp2))


def epsilon_from_absolute(eps_abs: complex, consts: PhysicalConstants = CONSTANTS) -> complex:
    """Convert an absolute permittivity (F/m) to a relative one."""
    return eps_abs / consts.eps0


def _positive(omega):
    if np.any(np.asarray(omega) <= 0):
        raise ValueError("angular frequency must be positive")
    return omega
