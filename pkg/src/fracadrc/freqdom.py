"""Frequency-domain analysis of disturbance estimation quality.

Covers the Laplace factors of the integer and improved fractional
observers, the compensated-object transfer functions seen by the outer
proportional loop, the integrator-mismatch delta(w) = 1 - jw*G(jw), its
squared magnitude in closed form (real trigonometric arithmetic, matched
gain b = b_o), and Bode sampling over log grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .fracops import frac_pow

CURVE_KINDS = ("complex_response", "mse", "mag_db", "phase_deg")


@dataclass(frozen=True, eq=False)
class FreqCurve:
    """Values sampled on a strictly increasing frequency grid (rad/s)."""

    omega: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.omega.size != self.values.size:
            raise ValueError("omega and values must have equal length")
        if self.omega.size == 0 or np.any(np.diff(self.omega) <= 0.0):
            raise ValueError("omega grid must be nonempty and strictly "
                             "increasing")


def log_grid(omega_min: float = 0.1, omega_max: float = 1e5,
             points_per_decade: int = 60) -> np.ndarray:
    """Log-spaced grid, `points_per_decade` per decade, endpoints included."""
    if not 0.0 < omega_min < omega_max:
        raise ValueError("need 0 < omega_min < omega_max")
    if points_per_decade < 1:
        raise ValueError("points_per_decade must be >= 1")
    decades = math.log10(omega_max / omega_min)
    n = int(round(decades * points_per_decade)) + 1
    return np.logspace(math.log10(omega_min), math.log10(omega_max), n)


def ieso_transfer(omega_o: float, b: float, mu: float, s) -> dict[str, complex]:
    """Laplace factors of the integer-order observer.

    Returns {z1_y, z1_u, z2_y, z2_u} over the common denominator
    s**2 + 2*omega_o*s + omega_o**2.  The response does not depend on the
    plant order; mu is accepted for symmetry with the fractional variant.
    """
    s = complex(s)
    den = s * s + 2.0 * omega_o * s + omega_o * omega_o
    if den == 0:
        raise ZeroDivisionError(f"observer pole at s={s}")
    w2 = omega_o * omega_o
    return {"z1_y": (2.0 * omega_o * s + w2) / den,
            "z1_u": b * s / den,
            "z2_y": w2 * s / den,
            "z2_u": -w2 * b / den}


def ifeso_transfer(omega_o: float, b: float, mu: float, s) -> dict[str, complex]:
    """Laplace factors of the improved fractional observer.

    Common denominator s**(mu+1) + 2*omega_o*s + omega_o**2; the extra
    entry q_z1 = s - s**mu maps z1 to the mismatch estimate q_hat.
    """
    s = complex(s)
    smu = frac_pow(s, mu)
    den = frac_pow(s, mu + 1.0) + 2.0 * omega_o * s + omega_o * omega_o
    if den == 0:
        raise ZeroDivisionError(f"observer pole at s={s}")
    w2 = omega_o * omega_o
    return {"z1_y": (2.0 * omega_o * s + w2) / den,
            "z1_u": b * s / den,
            "z2_y": w2 * smu / den,
            "z2_u": -w2 * b / den,
            "q_z1": s - smu}


def g_io(a_o: float, b_o: float, b: float, mu: float, omega_o: float,
         s) -> complex:
    """Compensated object (outer-loop plant) under the integer observer."""
    s = complex(s)
    if s == 0:
        raise ZeroDivisionError("g_io has a pole at s=0")
    smu = frac_pow(s, mu)
    den = s * (b_o * omega_o * omega_o
               + a_o * b * (s + 2.0 * omega_o)
               + b * smu * (s + 2.0 * omega_o))
    if den == 0:
        raise ZeroDivisionError(f"g_io singular at s={s}")
    return b_o * (s + omega_o) ** 2 / den


def g_ifio(a_o: float, b_o: float, b: float, mu: float, omega_o: float,
           s) -> complex:
    """Compensated object under the improved fractional observer.

    With a_o = 0 and b = b_o this is exactly 1/s: the mismatch estimate
    cancels the fractional dynamics completely.
    """
    s = complex(s)
    if s == 0:
        raise ZeroDivisionError("g_ifio has a pole at s=0")
    smu = frac_pow(s, mu)
    num = b_o * (frac_pow(s, 1.0 + mu) + 2.0 * omega_o * s
                 + omega_o * omega_o)
    den = s * (b_o * omega_o * (2.0 * s - 2.0 * smu + omega_o)
               + a_o * b * (s + 2.0 * omega_o)
               + b * smu * (s + 2.0 * omega_o))
    if den == 0:
        raise ZeroDivisionError(f"g_ifio singular at s={s}")
    return num / den


def io_evaluator(a_o: float, b_o: float, b: float, mu: float, omega_o: float):
    """Callable s -> g_io(s) with parameters bound."""
    return partial(g_io, a_o, b_o, b, mu, omega_o)


def ifio_evaluator(a_o: float, b_o: float, b: float, mu: float,
                   omega_o: float):
    """Callable s -> g_ifio(s) with parameters bound."""
    return partial(g_ifio, a_o, b_o, b, mu, omega_o)


def delta(G, omega: float) -> complex:
    """Integrator mismatch 1 - j*omega*G(j*omega) at one frequency."""
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    return 1.0 - 1j * omega * G(1j * omega)


def mse_io(omega, a_o: float, mu: float, omega_o: float):
    """|1 - jw*G_io(jw)|**2 in closed form, matched gain b = b_o.

    Real arithmetic only (powers of omega and cos/sin of pi*mu/2), so it is
    an independent route against the complex evaluation via delta(g_io).
    Accepts a scalar or an array of frequencies; omega = 0 is the finite
    limit (2*a_o*omega_o / (2*a_o*omega_o + omega_o**2))**2.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("omega must be >= 0")
    b1 = 2.0 * omega_o
    b2 = omega_o * omega_o
    cmu = math.cos(0.5 * math.pi * mu)
    smu = math.sin(0.5 * math.pi * mu)
    wmu = w ** mu
    n1 = (b1 * b1 + w * w) * (a_o * a_o + w * w + w ** (2.0 * mu)
                              + 2.0 * wmu * (a_o * cmu - w * smu))
    re = a_o * b1 + b2 + b1 * wmu * cmu - w * wmu * smu
    im = a_o * w + w * wmu * cmu + b1 * wmu * smu
    d1 = re * re + im * im
    if np.any(d1 == 0.0):
        raise ZeroDivisionError("mse_io denominator vanished")
    out = n1 / d1
    return float(out) if np.ndim(omega) == 0 else out


def mse_ifio(omega, a_o: float, mu: float, omega_o: float):
    """|1 - jw*G_ifio(jw)|**2 in closed form, matched gain b = b_o.

    The numerator carries a_o**2 as a factor: with a_o = 0 the improved
    observer leaves no integrator mismatch at any frequency.  Equals mse_io
    at omega = 0.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("omega must be >= 0")
    b1 = 2.0 * omega_o
    b2 = omega_o * omega_o
    cmu = math.cos(0.5 * math.pi * mu)
    smu = math.sin(0.5 * math.pi * mu)
    wmu = w ** mu
    n2 = a_o * a_o * (b1 * b1 + w * w)
    re = a_o * b1 + b2 - w * wmu * smu
    im = a_o + b1 + wmu * cmu
    d2 = re * re + w * w * (im * im)
    if np.any(d2 == 0.0):
        raise ZeroDivisionError("mse_ifio denominator vanished")
    out = n2 / d2
    return float(out) if np.ndim(omega) == 0 else out


def bode(G, omega_grid) -> tuple[FreqCurve, FreqCurve]:
    """Magnitude (dB) and unwrapped phase (deg) of G over the grid.

    Grid points where G is singular stay in the curves as NaN markers;
    the phase is unwrapped across the remaining points by cumulative
    nearest-branch selection.
    """
    w = np.asarray(omega_grid, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("omega grid must be a nonempty 1-D array")
    if np.any(w <= 0.0) or np.any(np.diff(w) <= 0.0):
        raise ValueError("omega grid must be positive and strictly "
                         "increasing")
    h = np.empty(w.size, dtype=complex)
    for i, wi in enumerate(w):
        try:
            h[i] = G(1j * wi)
        except (ZeroDivisionError, ValueError):
            h[i] = complex(np.nan, np.nan)
    finite = np.isfinite(h.real) & np.isfinite(h.imag) & (np.abs(h) > 0.0)
    mag = np.full(w.size, np.nan)
    mag[finite] = 20.0 * np.log10(np.abs(h[finite]))
    phase = np.full(w.size, np.nan)
    phase[finite] = np.degrees(np.unwrap(np.angle(h[finite])))
    return (FreqCurve(w, mag, "mag_db"), FreqCurve(w, phase, "phase_deg"))


def write_mse_csv(path, omega, e_io, e_ifio) -> None:
    """CSV with header omega_rad_s,e_io,e_ifio in full double precision."""
    omega = np.asarray(omega, dtype=float)
    e_io = np.asarray(e_io, dtype=float)
    e_ifio = np.asarray(e_ifio, dtype=float)
    with open(path, "w", newline="") as fh:
        fh.write("omega_rad_s,e_io,e_ifio\n")
        for w, a, c in zip(omega, e_io, e_ifio):
            fh.write(f"{float(w)!r},{float(a)!r},{float(c)!r}\n")


def write_bode_csv(path, omega, mag_db, phase_deg) -> None:
    """CSV with header omega_rad_s,mag_db,phase_deg in full precision."""
    omega = np.asarray(omega, dtype=float)
    mag_db = np.asarray(mag_db, dtype=float)
    phase_deg = np.asarray(phase_deg, dtype=float)
    with open(path, "w", newline="") as fh:
        fh.write("omega_rad_s,mag_db,phase_deg\n")
        for w, m, p in zip(omega, mag_db, phase_deg):
            fh.write(f"{float(w)!r},{float(m)!r},{float(p)!r}\n")
