"""TM plane-wave scattering by conducting sheets and slabs between two identical prisms.

Field pair and composition order
--------------------------------
Every element maps the tangential pair ``(E_y, H_z)`` on its left face to the
pair on its right face (x increasing).  For H_z = A e^{i kx x} + B e^{-i kx x}
one has E_y = eta (A e^{i kx x} - B e^{-i kx x}) with eta = kx / (omega eps).

* Slab of thickness d::

      [[cos(kx d),            i eta sin(kx d)],
       [i sin(kx d) / eta,    cos(kx d)      ]]

* Sheet of conductance sigma: E_y continuous, H_z drops by sigma E_y::

      [[1, 0], [-sigma, 1]]

Element matrices are multiplied left to right (the last element ends up
leftmost in the product).  All have unit determinant, which the matching step
uses analytically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import optimize

from .core import (
    CONSTANTS,
    PhysicalConstants,
    WaveKinematics,
    critical_angle,
    kinematics,
    kinematics_from_ky,
    media_admittances,
)

_SINC_SERIES = 1e-6


class StackError(ArithmeticError):
    """Numerically degenerate stack; ``index`` names the offending element (or None)."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NoResonanceError(ValueError):
    pass


@dataclass(frozen=True)
class Sheet:
    sigma: complex

    def __post_init__(self):
        if complex(self.sigma).real < 0:
            raise ValueError(f"sheet conductance must be passive (Re sigma >= 0), got {self.sigma!r}")


@dataclass(frozen=True)
class Slab:
    eps_rel: complex
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"slab thickness must be positive, got {self.d!r}")


StackElement = Union[Sheet, Slab]


@dataclass(frozen=True)
class LayerStack:
    n_prism: float
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("a stack needs at least one element")
        if not self.n_prism > 0:
            raise ValueError("prism index must be positive")

    def reversed(self) -> "LayerStack":
        return LayerStack(self.n_prism, self.elements[::-1])


@dataclass(frozen=True)
class ScatterResult:
    r: complex
    t: complex
    R: float
    T: float
    absorbed: float


@dataclass(frozen=True)
class GapField:
    """Forward/backward H_z amplitudes in the gap, phase-referenced to x = a."""

    f: complex
    g: complex
    kx_gap: complex
    eta2: complex
    a: float

    def fields(self, x):
        """Tangential ``(E_y, H_z)`` inside the gap at position ``x``."""
        ph = np.exp(1j * self.kx_gap * (x - self.a))
        fwd, bwd = self.f * ph, self.g / ph
        return self.eta2 * (fwd - bwd), fwd + bwd


def sinc(z):
    """sin(z)/z for complex z, with a series branch near zero."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _SINC_SERIES
    safe = np.where(small, 1.0, z)
    z2 = z * z
    out = np.where(small, 1.0 - z2 / 6.0 + z2 * z2 / 120.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out


def element_matrix(element: StackElement, kin: WaveKinematics,
                   consts: PhysicalConstants = CONSTANTS):
    """Return ``(m11, m12, m21, m22)`` for one element."""
    if isinstance(element, Sheet):
        one = np.ones_like(kin.k_y, dtype=complex)
        return one, 0 * one, -element.sigma * one, one
    if isinstance(element, Slab):
        eps = element.eps_rel * consts.eps0
        k0 = kin.omega / consts.c
        # even in kx_j, so the branch of the root is irrelevant
        kx2 = element.eps_rel * k0 * k0 - np.asarray(kin.k_y) ** 2 + 0j
        kx = np.sqrt(kx2)
        d = element.d
        sc = sinc(kx * d)
        cos = np.cos(kx * d)
        return (cos,
                1j * kx2 * d * sc / (kin.omega * eps),
                1j * kin.omega * eps * d * sc,
                cos)
    raise TypeError(f"unknown stack element {element!r}")


def transfer_matrix(elements: Sequence[StackElement], kin: WaveKinematics,
                    consts: PhysicalConstants = CONSTANTS):
    m11 = np.ones_like(kin.k_y, dtype=complex)
    m12 = 0 * m11
    m21 = 0 * m11
    m22 = m11.copy()
    for i, el in enumerate(elements):
        # overflow is reported below as StackError, not as a numpy warning
        with np.errstate(over="ignore", invalid="ignore"):
            a11, a12, a21, a22 = element_matrix(el, kin, consts)
            m11, m12, m21, m22 = (a11 * m11 + a12 * m21, a11 * m12 + a12 * m22,
                                  a21 * m11 + a22 * m21, a21 * m12 + a22 * m22)
        if not np.all(np.isfinite([m11, m12, m21, m22])):
            raise StackError(f"non-finite transfer matrix at element {i} ({el!r})", i)
    return m11, m12, m21, m22


def match(m, eta_in, eta_out):
    """Amplitude reflection and transmission for a unit-determinant matrix ``m``.

    Incident H_z amplitude is 1 on the left (admittance ``eta_in``); the
    transmitted wave leaves on the right into a medium of admittance
    ``eta_out``.
    """
    m11, m12, m21, m22 = m
    den = m11 * eta_in + m22 * eta_out - m12 - eta_in * eta_out * m21
    if np.any(den == 0) or not np.all(np.isfinite(den)):
        raise StackError("matching denominator vanishes")
    r = (m11 * eta_in + m12 - eta_out * m22 - eta_in * eta_out * m21) / den
    t = 2.0 * eta_in / den
    return r, t


def stack_transfer(stack: LayerStack, kin: WaveKinematics,
                   consts: PhysicalConstants = CONSTANTS) -> ScatterResult:
    if not np.isclose(kin.n_prism, stack.n_prism, rtol=1e-15, atol=0):
        raise ValueError("kinematics and stack disagree on the prism index")
    m = transfer_matrix(stack.elements, kin, consts)
    eta1 = kin.k_x / (kin.omega * stack.n_prism**2 * consts.eps0)
    r, t = match(m, eta1, eta1)
    R = np.abs(r) ** 2
    T = np.abs(t) ** 2
    return ScatterResult(r=r, t=t, R=R, T=T, absorbed=1.0 - R - T)


def sheet_gap_stack(sigma, a: float, n_prism: float, n_gap: float = 1.0) -> LayerStack:
    """Graphene-gap-graphene stack, identical sheets on both prism faces."""
    return LayerStack(n_prism, (Sheet(sigma), Slab(n_gap**2, a), Sheet(sigma)))


def sheet_gap_coefficients(sigma, eta1, eta2):
    """The ``(M, N)`` pair of the closed-form transmission coefficient."""
    M = 1.0 + sigma * eta1
    N = 0.5 * (eta2 / eta1 + eta1 / eta2 + 2.0 * sigma * eta2 + sigma**2 * eta1 * eta2)
    return M, N


def closed_form_t(kin: WaveKinematics, eta1, eta2, sigma, a: float,
                  consts: PhysicalConstants = CONSTANTS):
    """Transmission of the symmetric sheet-gap-sheet structure.

    t = 1 / (M cos(kx_gap a) - i N sin(kx_gap a)).  The eta1/eta2 sin term is
    evaluated as eta1 * omega * eps_gap * a * sinc(kx_gap a), so t stays
    finite and continuous at the critical angle.
    """
    if not a > 0:
        raise ValueError("gap thickness must be positive")
    z = kin.kx_gap * a
    s = np.sin(z)
    sin_over_eta2 = kin.omega * kin.n_gap**2 * consts.eps0 * a * sinc(z)
    M = 1.0 + sigma * eta1
    NS = 0.5 * (eta2 * s / eta1 + eta1 * sin_over_eta2
                + 2.0 * sigma * eta2 * s + sigma**2 * eta1 * eta2 * s)
    return 1.0 / (M * np.cos(z) - 1j * NS)


def closed_form_t_of_ky(sigma, a: float, lambda0: float, n_prism: float,
                        n_gap: float = 1.0,
                        consts: PhysicalConstants = CONSTANTS) -> Callable:
    def t_of_ky(ky):
        kin = kinematics_from_ky(ky, lambda0, n_prism, n_gap, consts)
        eta1, eta2 = media_admittances(kin, consts)
        return closed_form_t(kin, eta1, eta2, sigma, a, consts)
    return t_of_ky


def stack_t_of_ky(stack: LayerStack, lambda0: float, n_gap: float = 1.0,
                  consts: PhysicalConstants = CONSTANTS) -> Callable:
    def t_of_ky(ky):
        kin = kinematics_from_ky(ky, lambda0, stack.n_prism, n_gap, consts)
        return stack_transfer(stack, kin, consts).t
    return t_of_ky


def gap_field(sigma, a: float, kin: WaveKinematics, t,
              consts: PhysicalConstants = CONSTANTS) -> GapField:
    """Gap amplitudes from the boundary pair at x = a.

    Just inside the gap E_y = eta1 t and H_z = (1 + sigma eta1) t.  Undefined
    exactly at the critical angle, where eta2 vanishes.
    """
    eta1, eta2 = media_admittances(kin, consts)
    if np.any(eta2 == 0):
        raise ValueError("gap amplitudes are undefined at the critical angle")
    h = (1.0 + sigma * eta1) * t
    e_over_eta2 = eta1 * t / eta2
    return GapField(f=0.5 * (h + e_over_eta2), g=0.5 * (h - e_over_eta2),
                    kx_gap=kin.kx_gap, eta2=eta2, a=a)


def _evanescent_terms(theta, sigma, lambda0, n_prism, n_gap, a, consts):
    kin = kinematics(theta, lambda0, n_prism, n_gap, consts)
    if np.any(np.asarray(kin.theta) <= kin.theta_c) or np.any(np.asarray(kin.kappa) <= 0):
        raise ValueError("dispersion relation needs theta above the critical angle")
    eta1, eta2 = media_admittances(kin, consts)
    bracket = 0.5 * (eta2 / eta1 - eta1 / eta2 - sigma**2 * eta1 * eta2)
    return kin, eta1, bracket


def dispersion_residual(theta, sigma, lambda0: float, n_prism: float, n_gap: float,
                        a: float, consts: PhysicalConstants = CONSTANTS):
    """Zero-reflection condition of the sheet-gap-sheet structure (complex).

    sigma eta1 cosh(kappa a) - (eta2/eta1 - eta1/eta2 - sigma^2 eta1 eta2) sinh(kappa a) / 2,
    with eta2 = i kappa / (omega eps_gap).  Pure imaginary for lossless sheets.
    """
    kin, eta1, bracket = _evanescent_terms(theta, sigma, lambda0, n_prism, n_gap, a, consts)
    ka = kin.kappa * a
    return sigma * eta1 * np.cosh(ka) - bracket * np.sinh(ka)


def interface_residual(theta, sigma, lambda0: float, n_prism: float, n_gap: float = 1.0,
                       consts: PhysicalConstants = CONSTANTS):
    """Single sheet-dielectric interface limit (kappa a -> infinity) of the residual."""
    _, eta1, bracket = _evanescent_terms(theta, sigma, lambda0, n_prism, n_gap, 1.0, consts)
    return sigma * eta1 - bracket


def _default_bracket(n_prism, n_gap):
    tc = critical_angle(n_prism, n_gap)
    return tc + 1e-7, np.pi / 2 - 1e-7


def _check_bracket(bracket, n_prism, n_gap):
    lo, hi = bracket
    tc = critical_angle(n_prism, n_gap)
    if not (tc < lo < hi < np.pi / 2):
        raise ValueError("resonance bracket must lie inside (theta_c, pi/2)")
    return lo, hi


def find_reflection_minimum(stack: LayerStack, lambda0: float, bracket,
                            n_gap: float = 1.0, samples: int = 2000,
                            consts: PhysicalConstants = CONSTANTS) -> float:
    """Angle of the interior minimum of R(theta): grid scan, then golden section."""
    lo, hi = bracket

    def refl(th):
        return stack_transfer(stack, kinematics(th, lambda0, stack.n_prism, n_gap, consts),
                              consts).R

    grid = np.linspace(lo, hi, samples)
    R = refl(grid)
    i = int(np.argmin(R))
    if i == 0 or i == samples - 1 or not R[i] < min(R[0], R[-1]):
        raise NoResonanceError("no resonance in bracket")
    res = optimize.minimize_scalar(lambda th: float(refl(th)),
                                   bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                   method="golden", options={"xtol": 1e-12})
    return float(res.x)


def find_resonance(sigma, lambda0: float, n_prism: float, n_gap: float, a: float,
                   bracket=None, samples: int = 2000,
                   consts: PhysicalConstants = CONSTANTS) -> float:
    """Plasmon-assisted resonance angle (rad) of the sheet-gap-sheet structure.

    Lossless sheets: sign changes of residual/i on a uniform grid, refined by
    bisection to 1e-10 rad; the lowest-angle root is returned.  Lossy sheets
    (or no sign change) fall back to the interior minimum of R(theta).
    """
    sigma = complex(sigma)
    lo, hi = (_default_bracket(n_prism, n_gap) if bracket is None
              else _check_bracket(bracket, n_prism, n_gap))
    if sigma.real == 0:
        def f(th):
            return (dispersion_residual(th, sigma, lambda0, n_prism, n_gap, a, consts) / 1j).real

        grid = np.linspace(lo, hi, samples)
        vals = f(grid)
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
        if flips.size:
            j = flips[0]
            if vals[j] == 0:
                return float(grid[j])
            return float(optimize.bisect(lambda th: float(f(th)), grid[j], grid[j + 1],
                                         xtol=1e-10, rtol=4 * np.finfo(float).eps,
                                         maxiter=200))
    stack = sheet_gap_stack(sigma, a, n_prism, n_gap)
    return find_reflection_minimum(stack, lambda0, (lo, hi), n_gap, samples, consts)
