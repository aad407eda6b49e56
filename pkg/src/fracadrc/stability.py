"""Commensurate-order closed-loop stability analysis.

The loop order mu is rationalized to p/q; substituting w = s**(1/q) turns
the closed-loop characteristic equation into an ordinary polynomial in w,
and the loop is stable iff every root satisfies |arg(w_i)| > lambda*pi/2
with lambda = 1/q.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

MAX_DEGREE = 300
SECTOR_GUARD = 1e-9
RESIDUAL_TOL = 1e-8


def rationalize_order(mu: float, tol: float = 1e-9,
                      max_den: int = 100) -> tuple[int, int]:
    """Smallest-denominator coprime p/q matching mu within tol, q <= max_den."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    for q_den in range(1, max_den + 1):
        p = round(mu * q_den)
        if p < 1 or p >= q_den or math.gcd(p, q_den) != 1:
            continue
        if abs(p / q_den - mu) <= tol:
            return p, q_den
    raise ValueError(f"no rational p/q with q <= {max_den} matches "
                     f"mu={mu} within {tol}")


def ifeso_gain_check(beta1: float, beta2: float) -> bool:
    """Observer-estimation boundedness condition: both gains positive."""
    return beta1 > 0.0 and beta2 > 0.0


@dataclass(frozen=True, eq=False)
class CharPoly:
    """Real polynomial in w; coeffs indexed by power (length degree + 1)."""

    coeffs: np.ndarray
    p: int
    q_den: int
    lam: float
    params: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


def build_char_poly(b: float, b_o: float, a_o: float, K: float, beta1: float,
                    beta2: float, p: int, q_den: int) -> CharPoly:
    """Closed-loop characteristic polynomial of the improved-observer ADRC.

    Sparse in w: nonzero coefficients sit only at powers
    {2q+p, 2q, q+p, q, 0}.
    """
    if p < 1 or q_den <= p:
        raise ValueError(f"need 0 < p < q_den, got p={p}, q_den={q_den}")
    if b == 0.0:
        raise ValueError("b must be nonzero")
    degree = 2 * q_den + p
    if degree > MAX_DEGREE:
        raise ValueError(f"degree {degree} exceeds cap {MAX_DEGREE}")
    c = np.zeros(degree + 1)
    c[degree] = b
    c[2 * q_den] = b_o * beta1 + a_o * b
    c[q_den + p] = b * K + beta1 * b - beta1 * b_o
    c[q_den] = a_o * b * beta1 + a_o * b * K + K * b_o * beta1 + b_o * beta2
    c[0] = b_o * beta2 * K
    return CharPoly(coeffs=c, p=int(p), q_den=int(q_den), lam=1.0 / q_den,
                    params={"b": b, "b_o": b_o, "a_o": a_o, "K": K,
                            "beta1": beta1, "beta2": beta2})


def _coeff_array(poly) -> np.ndarray:
    if isinstance(poly, CharPoly):
        return poly.coeffs
    return np.asarray(poly, dtype=float)


def _normalized_residuals(c: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """|P(w)| / sum_k |c_k| * max(1, |w|)**k, one entry per root."""
    vals = np.abs(npoly.polyval(roots, c))
    powers = np.arange(c.size)
    absc = np.abs(c)
    scale = np.array([np.sum(absc * np.maximum(1.0, abs(w)) ** powers)
                      for w in roots])
    return vals / scale


def poly_roots(poly, residual_tol: float = RESIDUAL_TOL) -> np.ndarray:
    """All complex roots, via eigenvalues of the balanced companion matrix
    plus one Newton polish per root, verified against a residual bound.

    Raises ArithmeticError with the per-root residuals if the bound fails.
    Output is sorted by (real, imag) so repeated calls are reproducible.
    """
    c = _coeff_array(poly)
    if c.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if c[-1] == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    roots = np.roots(c[::-1]).astype(complex)
    dc = npoly.polyder(c)
    pv = npoly.polyval(roots, c)
    dv = npoly.polyval(roots, dc)
    safe = dv != 0
    polished = np.where(safe, roots - pv / np.where(safe, dv, 1.0), roots)
    r_raw = _normalized_residuals(c, roots)
    r_pol = _normalized_residuals(c, polished)
    take = r_pol <= r_raw
    roots = np.where(take, polished, roots)
    residuals = np.where(take, r_pol, r_raw)
    worst = float(np.max(residuals))
    if worst > residual_tol:
        raise ArithmeticError(
            f"root refinement failed: max normalized residual {worst:.3e} "
            f"exceeds {residual_tol:.1e}; residuals={residuals!r}")
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Sector-test outcome for one characteristic polynomial."""

    roots: np.ndarray
    args: np.ndarray
    margin: float
    stable: bool
    residuals: np.ndarray
    marginal: bool
    lam: float
    degree: int

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "lambda": self.lam,
            "roots": [{"re": float(w.real), "im": float(w.imag),
                       "arg": float(a)}
                      for w, a in zip(self.roots, self.args)],
            "margin": self.margin,
            "stable": self.stable,
            "residual_max": float(np.max(self.residuals)),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")


def sector_test(poly: CharPoly, guard: float = SECTOR_GUARD) -> StabilityReport:
    """Verdict on |arg(w_i)| > lam*pi/2 for every root.

    margin = min |arg(w_i)| - lam*pi/2.  A margin inside (0, guard] is
    flagged marginal and judged unstable (conservative).
    """
    roots = poly_roots(poly)
    residuals = _normalized_residuals(_coeff_array(poly), roots)
    args = np.angle(roots)
    margin = float(np.min(np.abs(args)) - poly.lam * np.pi / 2.0)
    return StabilityReport(roots=roots, args=args, margin=margin,
                           stable=margin > guard,
                           residuals=residuals,
                           marginal=0.0 < margin <= guard,
                           lam=poly.lam, degree=poly.degree)


def critical_gain(b: float, b_o: float, a_o: float, mu: float, omega_o: float,
                  k_low: float = 1e-2, k_high: float = 1e9,
                  rel_tol: float = 1e-6) -> float | None:
    """Smallest K at which the sector test first fails when sweeping upward
    from k_low; None if the loop stays stable all the way to k_high."""
    p, q_den = rationalize_order(mu)
    beta1, beta2 = 2.0 * omega_o, omega_o * omega_o

    def stable(K: float) -> bool:
        return sector_test(build_char_poly(b, b_o, a_o, K, beta1, beta2,
                                           p, q_den)).stable

    if not stable(k_low):
        return k_low
    lo = k_low
    hi = k_low
    while True:
        if hi >= k_high:
            return None
        hi = min(2.0 * hi, k_high)
        if not stable(hi):
            break
        lo = hi
    while hi / lo > 1.0 + rel_tol:
        mid = math.sqrt(lo * hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return hi
