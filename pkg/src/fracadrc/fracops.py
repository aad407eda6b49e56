"""Fractional-calculus kernels.

Two interchangeable realizations of the order-mu differintegral d^mu/dt^mu:
a discrete Grunwald-Letnikov (GL) convolution with binomial weights, and a
band-limited Oustaloup pole/zero ladder approximating s**mu.  The GL form is
the time-domain engine used by the plant and observers; the Oustaloup filter
exists mainly to cross-validate it and for frequency-shaped filtering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal as _signal


def gl_coefficients(mu: float, count: int) -> np.ndarray:
    """First `count` GL binomial weights w_k for order `mu`.

    w_0 = 1 and w_k = w_{k-1} * (1 - (mu + 1) / k).  For 0 < mu < 1 every
    weight after w_0 is negative with strictly decreasing magnitude, and the
    partial sums decrease monotonically toward 0.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count == 1:
        return np.ones(1)
    factors = np.empty(count)
    factors[0] = 1.0
    factors[1:] = 1.0 - (mu + 1.0) / np.arange(1.0, count)
    return np.cumprod(factors)


class GLOperator:
    """Streaming GL differintegrator of order `order` at fixed step `step`.

    Keeps the full input history by default; pass `memory_len` to truncate
    the convolution window to the most recent samples (short-memory
    principle).  Negative orders integrate.
    """

    def __init__(self, order: float, step: float, memory_len: int | None = None):
        if step <= 0.0:
            raise ValueError(f"step must be positive, got {step}")
        if memory_len is not None and memory_len < 1:
            raise ValueError(f"memory_len must be >= 1, got {memory_len}")
        self.order = float(order)
        self.step = float(step)
        self.memory_len = memory_len
        self._scale = self.step ** -self.order
        self._size = 0
        self._cap = 0
        self._grow(1024)

    def _grow(self, capacity: int) -> None:
        hist = np.zeros(capacity)
        if self._size:
            hist[: self._size] = self._hist[: self._size]
        self._hist = hist
        # one extra weight so a full buffer still reaches w_cap;
        # _wrev[capacity - k] == w_k, so a contiguous slice of _wrev lines
        # up with a chronological slice of _hist in the sum
        self._wrev = gl_coefficients(self.order, capacity + 1)[::-1].copy()
        self._cap = capacity

    @property
    def size(self) -> int:
        return self._size

    @property
    def last(self) -> float:
        """Most recent sample, 0.0 before anything was pushed."""
        return float(self._hist[self._size - 1]) if self._size else 0.0

    @property
    def coeffs(self) -> np.ndarray:
        """Weight table w_0 .. w_{cap-1} currently in use."""
        return self._wrev[::-1]

    @property
    def history(self) -> np.ndarray:
        """Samples inside the active convolution window (newest last)."""
        window = self._size
        if self.memory_len is not None:
            window = min(window, self.memory_len)
        return self._hist[self._size - window : self._size].copy()

    def tail_sum(self) -> float:
        """sum_{k>=1} w_k x_{n-k} for the upcoming sample index n.

        This is the history part of the GL sum, exposed separately so that
        implicit update rules can solve for the newest sample.
        """
        m = self._size
        if self.memory_len is not None:
            m = min(m, self.memory_len - 1)
        if m == 0:
            return 0.0
        return float(np.dot(self._wrev[self._cap - m : self._cap],
                            self._hist[self._size - m : self._size]))

    def push(self, sample: float) -> None:
        if self._size == self._cap:
            self._grow(2 * self._cap)
        self._hist[self._size] = sample
        self._size += 1

    def apply(self, sample: float) -> float:
        """Push `sample` and return the differintegral at the new sample."""
        tail = self.tail_sum()
        self.push(sample)
        return self._scale * (sample + tail)

    def reset(self) -> None:
        self._size = 0


def gl_differintegral(x, mu: float, step: float,
                      memory_len: int | None = None) -> np.ndarray:
    """Order-`mu` GL differintegral of a whole uniformly sampled signal.

    Zero history is assumed before the first sample and a value is returned
    at every sample.  Numerically equivalent to streaming GLOperator.apply
    over `x`, but computed as a single FFT convolution.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("x must be one-dimensional")
    if x.size == 0:
        return x.copy()
    count = x.size if memory_len is None else min(x.size, memory_len)
    w = gl_coefficients(mu, count)
    y = _signal.fftconvolve(x, w)[: x.size]
    return (step ** -mu) * y


def frac_pow(s, mu: float) -> complex:
    """Principal-branch complex power s**mu.

    On the positive imaginary axis: (j*w)**mu = w**mu * exp(j*mu*pi/2).
    s = 0 maps to 0 for mu > 0 and is a domain error otherwise.
    """
    s = complex(s)
    if s == 0:
        if mu > 0:
            return 0j
        raise ValueError(f"s**mu undefined at s=0 for mu <= 0 (mu={mu})")
    return s ** mu


@dataclass
class OustaloupFilter:
    """Band-limited rational approximation of s**order.

    A ladder of 2*n_cells + 1 real zero/pole pairs spread log-evenly over
    [band_low, band_high] rad/s.  `zeros` and `poles` hold the actual
    (negative real) root locations; `freq_response` evaluates the continuous
    filter, while `filter_sample`/`filter_signal` run the bilinear
    discretization attached via `attach_discretization`.
    """

    order: float
    band_low: float
    band_high: float
    n_cells: int
    zeros: np.ndarray
    poles: np.ndarray
    gain: float
    step: float | None = None
    _sos: np.ndarray | None = field(default=None, repr=False)
    _state: np.ndarray | None = field(default=None, repr=False)

    def freq_response(self, s):
        """Continuous response H(s); accepts a complex scalar or array."""
        arr = np.asarray(s, dtype=complex)
        num = np.prod(arr[..., None] - self.zeros, axis=-1)
        den = np.prod(arr[..., None] - self.poles, axis=-1)
        out = self.gain * num / den
        if arr.ndim == 0:
            return complex(out)
        return out

    def attach_discretization(self, step: float) -> None:
        """Bilinear-map the ladder to sample time `step` and reset state."""
        if step <= 0.0:
            raise ValueError(f"step must be positive, got {step}")
        zd, pd, kd = _signal.bilinear_zpk(self.zeros, self.poles, self.gain,
                                          fs=1.0 / step)
        self._sos = _signal.zpk2sos(zd, pd, kd)
        self._state = np.zeros((self._sos.shape[0], 2))
        self.step = step

    def reset(self) -> None:
        if self._state is not None:
            self._state[:] = 0.0

    def _require_sos(self) -> np.ndarray:
        if self._sos is None:
            raise RuntimeError("filter not discretized; call "
                               "attach_discretization or pass step= to "
                               "oustaloup_design")
        return self._sos

    def filter_sample(self, x: float) -> float:
        """Advance the discretized filter by one input sample (stateful)."""
        sos = self._require_sos()
        y = float(x)
        for i in range(sos.shape[0]):
            b0, b1, b2, _, a1, a2 = sos[i]
            z0, z1 = self._state[i]
            out = b0 * y + z0
            self._state[i, 0] = b1 * y - a1 * out + z1
            self._state[i, 1] = b2 * y - a2 * out
            y = out
        return y

    def filter_signal(self, x) -> np.ndarray:
        """Filter a whole signal from zero initial state (leaves the
        streaming state untouched)."""
        sos = self._require_sos()
        zi = np.zeros((sos.shape[0], 2))
        y, _ = _signal.sosfilt(sos, np.asarray(x, dtype=float), zi=zi)
        return y


def oustaloup_design(mu: float, band_low: float = 1e-2, band_high: float = 1e4,
                     n_cells: int = 5, step: float | None = None) -> OustaloupFilter:
    """Design the recursive band-limited approximation of s**mu.

    Zero/pole break frequencies follow the standard geometric recursion over
    the band; the high-frequency gain is band_high**mu.  Negative orders are
    built by inverting the ladder for |mu|.
    """
    if not 0.0 < abs(mu) < 1.0:
        raise ValueError(f"|mu| must lie in (0, 1), got {mu}")
    if not 0.0 < band_low < band_high:
        raise ValueError(f"need 0 < band_low < band_high, got "
                         f"[{band_low}, {band_high}]")
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1, got {n_cells}")
    n = n_cells
    r = abs(mu)
    ratio = band_high / band_low
    k = np.arange(-n, n + 1, dtype=float)
    zeros = -band_low * ratio ** ((k + n + 0.5 * (1.0 - r)) / (2 * n + 1))
    poles = -band_low * ratio ** ((k + n + 0.5 * (1.0 + r)) / (2 * n + 1))
    gain = band_high ** r
    if mu < 0:
        zeros, poles = poles, zeros
        gain = band_high ** mu
    filt = OustaloupFilter(order=float(mu), band_low=float(band_low),
                           band_high=float(band_high), n_cells=n_cells,
                           zeros=zeros, poles=poles, gain=float(gain))
    if step is not None:
        filt.attach_discretization(step)
    return filt
