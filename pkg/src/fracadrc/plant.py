"""Fractional first-order SISO plant with an additive input disturbance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracops import GLOperator, frac_pow, gl_differintegral


class FracPlant:
    """Plant b_o / (s**mu + a_o), simulated with the implicit GL update.

    Time-domain model: y^(mu) + a_o*y = b_o*u + d, zero initial conditions.
    Each step solves the GL-discretized relation exactly for the newest
    output sample, so the update is unconditionally well defined whenever
    Ts**-mu + a_o != 0.
    """

    def __init__(self, a_o: float, b_o: float, mu: float, Ts: float,
                 memory_len: int | None = None):
        if not 0.0 < mu < 1.0:
            raise ValueError(f"mu must lie in (0, 1), got {mu}")
        if b_o == 0.0:
            raise ValueError("b_o must be nonzero")
        if Ts <= 0.0:
            raise ValueError(f"Ts must be positive, got {Ts}")
        self.a_o = float(a_o)
        self.b_o = float(b_o)
        self.mu = float(mu)
        self.Ts = float(Ts)
        self.memory_len = memory_len
        self.gl = GLOperator(mu, Ts, memory_len)
        self._scale = self.Ts ** -self.mu
        denom = self._scale + self.a_o  # w_0 = 1
        if denom == 0.0:
            raise ValueError("singular update: Ts**-mu + a_o == 0")
        self._denom = denom

    def tf(self, s) -> complex:
        """Transfer function b_o / (s**mu + a_o), principal branch."""
        den = frac_pow(s, self.mu) + self.a_o
        if den == 0:
            raise ZeroDivisionError(f"transfer-function pole at s={s}")
        return self.b_o / den

    @property
    def y(self) -> float:
        """Most recent output sample (0 before the first step)."""
        return self.gl.last

    def step(self, u: float, d: float = 0.0) -> float:
        """Advance one sample under held input u and disturbance d."""
        tail = self.gl.tail_sum()
        y_new = (self.b_o * u + d - self._scale * tail) / self._denom
        self.gl.push(y_new)
        return y_new

    def reset(self) -> None:
        self.gl.reset()

    def with_gain_scale(self, scale: float) -> "FracPlant":
        """Fresh plant with b_o scaled; used for loop-gain robustness runs."""
        return FracPlant(self.a_o, scale * self.b_o, self.mu, self.Ts,
                         self.memory_len)


@dataclass
class DisturbanceSignal:
    """Additive plant-input disturbance d(t)."""

    KINDS = ("zero", "step", "sinusoid", "samples")

    kind: str = "zero"
    amplitude: float = 0.0
    frequency: float = 0.0  # rad/s, sinusoid only
    onset: float = 0.0      # seconds, step only
    samples: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        if self.samples is not None:
            self.samples = np.asarray(self.samples, dtype=float)

    @classmethod
    def zero(cls) -> "DisturbanceSignal":
        return cls()

    @classmethod
    def step(cls, amplitude: float, onset: float = 0.0) -> "DisturbanceSignal":
        return cls(kind="step", amplitude=amplitude, onset=onset)

    @classmethod
    def sinusoid(cls, amplitude: float, frequency: float) -> "DisturbanceSignal":
        return cls(kind="sinusoid", amplitude=amplitude, frequency=frequency)

    @classmethod
    def from_samples(cls, samples) -> "DisturbanceSignal":
        return cls(kind="samples", samples=np.asarray(samples, dtype=float))

    def render(self, t: np.ndarray) -> np.ndarray:
        """Sample the disturbance on the time grid `t`."""
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros(t.size)
        if self.kind == "step":
            return self.amplitude * (t >= self.onset).astype(float)
        if self.kind == "sinusoid":
            return self.amplitude * np.sin(self.frequency * t)
        if self.samples is None or self.samples.size < t.size:
            raise ValueError("disturbance sample record shorter than horizon")
        return self.samples[: t.size].copy()


def reconstruct_disturbances(trajectory, plant, b: float) -> dict[str, np.ndarray]:
    """Ground-truth disturbance signals for observer-accuracy scoring.

    `trajectory` must carry aligned y/u/d arrays and the sample time Ts;
    `plant` supplies the true parameters (a_o, b_o, mu).  ydot comes from
    central differences (one-sided at the ends), the fractional derivative
    from the GL convolution.  Returns the lumped total disturbance seen by
    each observer structure plus the derivative mismatch q = ydot - y^(mu):

      f_ifo = -a_o*y + (b_o - b)*u + d        (improved fractional observer)
      f_fo  = same signal                      (fractional observer)
      f_io  = f_ifo + q                        (integer observer)
    """
    y = np.asarray(trajectory.y, dtype=float)
    u = np.asarray(trajectory.u, dtype=float)
    d = np.asarray(trajectory.d, dtype=float)
    if y.size < 3:
        raise ValueError("trajectory must have at least 3 samples")
    if not (y.size == u.size == d.size):
        raise ValueError("trajectory arrays must have equal length")
    Ts = float(trajectory.Ts)
    ydot = np.gradient(y, Ts)
    ymu = gl_differintegral(y, plant.mu, Ts)
    q = ydot - ymu
    f_ifo = -plant.a_o * y + (plant.b_o - b) * u + d
    return {"f_ifo": f_ifo, "f_io": f_ifo + q, "f_fo": f_ifo.copy(), "q": q}
