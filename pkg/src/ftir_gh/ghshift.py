"""Goos-Hanchen shift of the transmitted beam.

Sign convention: shifts are reported as s = Im(d ln t / d k_y).  With the
exp(-i omega t), exp(+i k_y y) plane waves used throughout, the centroid of a
transmitted bounded beam sits at y = -s.  The beam method reports the negated
centroid so both methods share one sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class GHError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GHResult:
    s: float
    s_over_lambda: float
    method: str
    h_used: float | None
    err_est: float


@dataclass(frozen=True)
class BeamSpec:
    """Gaussian beam: waist (m), spectral samples, half-window in units of 1/waist."""

    waist: float
    samples: int = 8192
    span: float = 10.0

    def __post_init__(self):
        if not self.waist > 0:
            raise ValueError("beam waist must be positive")
        n = self.samples
        if n < 256 or n & (n - 1):
            raise ValueError("beam samples must be a power of two >= 256")
        if not self.span >= 4:
            raise ValueError("spectral span must be at least 4 / waist")


def _result(s, lambda0, method, h, err):
    return GHResult(s=float(s), s_over_lambda=float(s) / lambda0, method=method,
                    h_used=h, err_est=float(err))


def gh_stationary(t_of_ky: Callable, theta0: float, lambda0: float,
                  n_prism: float, refinements: int = 2) -> GHResult:
    """Stationary-phase shift from a central difference of t in k_y.

    Uses the ratio t'/t so no phase unwrapping is needed.  Steps h and h/2
    are combined by one Richardson level; their difference is the error
    estimate.  When it exceeds 1e-3 |s| the step is halved, at most
    ``refinements`` times.
    """
    k = n_prism * 2.0 * np.pi / lambda0
    ky0 = k * np.sin(theta0)
    t0 = complex(t_of_ky(ky0))
    if not abs(t0) > 1e-300:
        raise GHError("zero transmission")

    def shift(h):
        tp, tm = t_of_ky(np.array([ky0 + h, ky0 - h]))
        return ((tp - tm) / (2.0 * h * t0)).imag

    h = 1e-6 * k
    s = shift(h)
    # absolute floor so that an exactly vanishing shift is not "unreliable"
    floor = 1e-9 / k
    for _ in range(refinements + 1):
        s_half = shift(h / 2)
        err = abs(s - s_half)
        if err <= 1e-3 * abs(s) + floor:
            # one Richardson level removes the O(h^2) term; err stays conservative
            return _result((4.0 * s_half - s) / 3.0, lambda0, "stationary", h, err)
        h, s = h / 2, s_half
    raise GHError(f"derivative unreliable (err {err:.3g} m vs |s| {abs(s):.3g} m)")


def _beam_centroid(t_of_ky, ky0, waist, samples, span, pad=4):
    dk = 2.0 * span / (waist * samples)
    d = (np.arange(samples) - samples // 2) * dk
    spectrum = np.exp(-(d * waist) ** 2 / 4.0) * t_of_ky(ky0 + d)
    buf = np.zeros(pad * samples, dtype=complex)
    buf[:samples] = spectrum
    intensity = np.fft.fftshift(np.abs(np.fft.ifft(buf)) ** 2)
    dy = 2.0 * np.pi / (pad * samples * dk)
    y = (np.arange(pad * samples) - pad * samples // 2) * dy
    total = intensity.sum()
    if not total > 0:
        raise GHError("zero transmission")
    return float((intensity * y).sum() / total)


def gh_beam(t_of_ky: Callable, theta0: float, beam: BeamSpec, lambda0: float,
            n_prism: float) -> GHResult:
    """Shift of the transmitted Gaussian beam from its intensity centroid.

    The angular spectrum exp(-(k_y - k_y0)^2 w^2 / 4) is multiplied by t and
    resummed on a zero-padded FFT grid at the exit plane.  The error estimate
    is the change on doubling the number of spectral samples.
    """
    k = n_prism * 2.0 * np.pi / lambda0
    ky0 = k * np.sin(theta0)
    half = beam.span / beam.waist
    if abs(ky0) + half >= k:
        raise GHError("beam spectral window leaves the propagating range of the prism")
    if np.exp(-beam.span**2 / 4.0) > 1e-8:
        raise GHError("beam clipped: spectrum at window edge exceeds 1e-8 of peak")
    c1 = _beam_centroid(t_of_ky, ky0, beam.waist, beam.samples, beam.span)
    c2 = _beam_centroid(t_of_ky, ky0, beam.waist, 2 * beam.samples, beam.span)
    return _result(-c1, lambda0, "beam", None, abs(c2 - c1))


def divergence(lambda0: float, w: float) -> float:
    """Far-field half-angle divergence (rad) of a Gaussian beam of waist ``w``."""
    if not w > 0:
        raise ValueError("beam waist must be positive")
    return lambda0 / (np.pi * w)


def peak_width(theta, s) -> float:
    """Full width at half of the extremal |s|, linearly interpolated."""
    theta = np.asarray(theta, dtype=float)
    mag = np.abs(np.asarray(s, dtype=float))
    i = int(np.argmax(mag))
    if i == 0 or i == mag.size - 1:
        raise ValueError("no peak: extremum lies on the boundary")
    half = mag[i] / 2.0

    def crossing(step):
        j = i
        while 0 <= j + step < mag.size:
            if mag[j + step] < half:
                a, b = mag[j], mag[j + step]
                frac = (a - half) / (a - b)
                return theta[j] + frac * (theta[j + step] - theta[j])
            j += step
        raise ValueError("no peak: curve does not fall to half maximum")

    return float(crossing(1) - crossing(-1))
