"""Physical constants and plane-wave kinematics for the two-prism geometry.

Time convention: fields vary as exp(-i omega t), so a plane wave in the prism
is exp[i(k_x x + k_y y)].  Passive media then have Im(eps) >= 0 and
Re(sigma) >= 0.  Every other module relies on this one convention.

Lengths are metres, angles radians, permittivities absolute (F/m) unless a
name says ``_rel``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy
from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    e: float
    hbar: float
    k_B: float
    eps0: float
    c: float
    m_e: float
    version: str

    @classmethod
    def from_scipy(cls) -> "PhysicalConstants":
        return cls(
            e=_sc.e,
            hbar=_sc.hbar,
            k_B=_sc.k,
            eps0=_sc.epsilon_0,
            c=_sc.c,
            m_e=_sc.m_e,
            version=f"CODATA via scipy {scipy.__version__}",
        )


CONSTANTS = PhysicalConstants.from_scipy()

# |kx_gap^2| below this fraction of the gap wavenumber squared is snapped to
# zero so that theta == theta_c yields kappa == 0 exactly.
_CRITICAL_SNAP = 1e-13


@dataclass(frozen=True)
class WaveKinematics:
    """Wave-vector bookkeeping for one incidence configuration.

    Array-valued fields are allowed (broadcast over ``theta``); every
    downstream routine in the package is elementwise.
    """

    omega: float
    lambda0: float
    theta: np.ndarray | float
    n_prism: float
    n_gap: float
    k: float
    k_x: np.ndarray | float
    k_y: np.ndarray | float
    kx_gap: np.ndarray | complex
    kappa: np.ndarray | float
    theta_c: float

    @property
    def k0(self) -> float:
        return 2.0 * np.pi / self.lambda0


def _check_media(lambda0: float, n_prism: float, n_gap: float) -> None:
    if not lambda0 > 0:
        raise ValueError(f"wavelength must be positive, got {lambda0!r}")
    if not (n_gap > 0 and n_prism >= n_gap):
        raise ValueError(
            f"need n_prism >= n_gap > 0, got n_prism={n_prism!r}, n_gap={n_gap!r}"
        )


def _gap_normal(k_y, n_gap, k0):
    kg2 = (n_gap * k0) ** 2
    q = kg2 - np.asarray(k_y, dtype=float) ** 2
    q = np.where(np.abs(q) <= _CRITICAL_SNAP * kg2, 0.0, q)
    root = np.sqrt(np.abs(q))
    kx_gap = np.where(q >= 0, root + 0j, 1j * root)
    kappa = np.where(q < 0, root, 0.0)
    return kx_gap, kappa


def _squeeze(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def kinematics(theta, lambda0: float, n_prism: float, n_gap: float = 1.0,
               consts: PhysicalConstants = CONSTANTS) -> WaveKinematics:
    """Kinematics for incidence angle ``theta`` (rad) inside the prism."""
    _check_media(lambda0, n_prism, n_gap)
    th = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(th)) or np.any(th < 0) or np.any(th >= np.pi / 2):
        raise ValueError("incidence angle must satisfy 0 <= theta < pi/2")
    k0 = 2.0 * np.pi / lambda0
    k = n_prism * k0
    k_y = k * np.sin(th)
    k_x = k * np.cos(th)
    return _build(th, k_x, k_y, k, k0, lambda0, n_prism, n_gap, consts)


def kinematics_from_ky(k_y, lambda0: float, n_prism: float, n_gap: float = 1.0,
                       consts: PhysicalConstants = CONSTANTS) -> WaveKinematics:
    """Kinematics parameterised by the tangential wavenumber.

    Unlike :func:`kinematics` this accepts negative ``k_y`` (needed for
    symmetric differences around normal incidence).  ``|k_y|`` must stay
    below the prism wavenumber.
    """
    _check_media(lambda0, n_prism, n_gap)
    k0 = 2.0 * np.pi / lambda0
    k = n_prism * k0
    ky = np.asarray(k_y, dtype=float)
    if np.any(np.abs(ky) >= k):
        raise ValueError("|k_y| must be below the prism wavenumber")
    k_x = np.sqrt(k * k - ky * ky)
    th = np.arctan2(ky, k_x)
    return _build(th, k_x, ky, k, k0, lambda0, n_prism, n_gap, consts)


def _build(th, k_x, k_y, k, k0, lambda0, n_prism, n_gap, consts):
    kx_gap, kappa = _gap_normal(k_y, n_gap, k0)
    return WaveKinematics(
        omega=consts.c * k0,
        lambda0=lambda0,
        theta=_squeeze(th),
        n_prism=n_prism,
        n_gap=n_gap,
        k=k,
        k_x=_squeeze(k_x),
        k_y=_squeeze(k_y),
        kx_gap=_squeeze(kx_gap),
        kappa=_squeeze(kappa),
        theta_c=critical_angle(n_prism, n_gap),
    )


def critical_angle(n_prism: float, n_gap: float) -> float:
    return float(np.arcsin(n_gap / n_prism))


def admittances(kin: WaveKinematics, eps_prism: float, eps_gap: float):
    """Return ``(eta1, eta2)``: E_tan/H_tan of the forward TM wave in prism and gap.

    ``eta1 = k_x / (omega eps_prism)`` is real; ``eta2 = kx_gap / (omega eps_gap)``
    is complex and purely imaginary above the critical angle.
    """
    if eps_prism == 0 or eps_gap == 0:
        raise ValueError("permittivities must be nonzero")
    eta1 = kin.k_x / (kin.omega * eps_prism)
    eta2 = kin.kx_gap / (kin.omega * eps_gap)
    return eta1, eta2


def media_admittances(kin: WaveKinematics, consts: PhysicalConstants = CONSTANTS):
    """:func:`admittances` with eps taken from the refractive indices in ``kin``."""
    return admittances(kin, kin.n_prism**2 * consts.eps0, kin.n_gap**2 * consts.eps0)
