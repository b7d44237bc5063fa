"""Uniformly sampled waveforms, two-level symbol streams and generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def _check_finite_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Waveform:
    """Real-valued signal on a uniform grid ``t[i] = t0 + i * dt``."""

    dt: float
    samples: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        _check_finite_positive("dt", self.dt)
        if not math.isfinite(self.t0):
            raise ValueError(f"t0 must be finite, got {self.t0!r}")
        samples = _frozen_array(self.samples)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples contain NaN or Inf")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Waveform):
            return NotImplemented
        return (
            self.dt == other.dt
            and self.t0 == other.t0
            and np.array_equal(self.samples, other.samples)
        )

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.samples)) * self.dt

    @property
    def duration(self) -> float:
        return len(self.samples) * self.dt

    def with_samples(self, samples) -> "Waveform":
        """Same grid, new values."""
        return Waveform(self.dt, samples, self.t0)

    def same_grid(self, other: "Waveform") -> bool:
        return self.dt == other.dt and self.t0 == other.t0 and len(self) == len(other)

    def to_csv(self, path) -> None:
        write_waveform_csv(path, self)


@dataclass(frozen=True, eq=False)
class BitStream:
    """Sequence of +1/-1 symbols emitted once per period ``Ts``."""

    Ts: float
    symbols: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int8))

    def __post_init__(self):
        _check_finite_positive("Ts", self.Ts)
        sym = np.asarray(self.symbols)
        if sym.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if not np.all((sym == 1) | (sym == -1)):
            raise ValueError("every symbol must be exactly +1 or -1")
        object.__setattr__(self, "symbols", _frozen_array(sym, dtype=np.int8))

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.Ts == other.Ts and np.array_equal(self.symbols, other.symbols)

    @property
    def rate(self) -> float:
        return 1.0 / self.Ts


def _n_samples(duration: float, dt: float) -> int:
    _check_finite_positive("dt", dt)
    if not math.isfinite(duration) or duration < dt:
        raise ValueError(f"duration must be >= dt ({dt!r}), got {duration!r}")
    return int(round(duration / dt))


def sine(amplitude: float, frequency: float, phase: float = 0.0, *, dt: float,
         duration: float, t0: float = 0.0) -> Waveform:
    if not math.isfinite(amplitude) or amplitude < 0:
        raise ValueError(f"amplitude must be finite and >= 0, got {amplitude!r}")
    _check_finite_positive("frequency", frequency)
    if not math.isfinite(phase):
        raise ValueError("phase must be finite")
    n = _n_samples(duration, dt)
    t = t0 + np.arange(n) * dt
    return Waveform(dt, amplitude * np.sin(2 * np.pi * frequency * t + phase), t0)


def ramp(v_start: float, v_end: float, *, dt: float, duration: float) -> Waveform:
    """Linear ramp from ``v_start`` at t=0 toward ``v_end`` at t=duration."""
    if not (math.isfinite(v_start) and math.isfinite(v_end)):
        raise ValueError("ramp bounds must be finite")
    n = _n_samples(duration, dt)
    t = np.arange(n) * dt
    return Waveform(dt, v_start + (v_end - v_start) * (t / duration))


def constant(value: float, *, dt: float, duration: float) -> Waveform:
    n = _n_samples(duration, dt)
    return Waveform(dt, np.full(n, float(value)))


def pulse_shape(t, Ts: float):
    """p(t) = u(t) - u(t - Ts/2), with the half-open convention 1 on [0, Ts/2).

    Accepts scalars or arrays.
    """
    _check_finite_positive("Ts", Ts)
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite")
    out = ((t_arr >= 0.0) & (t_arr < Ts / 2)).astype(float)
    return float(out) if out.ndim == 0 else out


def samples_per_period(period: float, dt: float, what: str = "period") -> int:
    """Integer number of grid steps in ``period``; raises if not a whole multiple."""
    _check_finite_positive(what, period)
    _check_finite_positive("dt", dt)
    ratio = period / dt
    m = int(round(ratio))
    if m < 1 or abs(ratio - m) > 1e-9 * ratio:
        raise ValueError(
            f"{what} {period!r} s is not a whole multiple of dt {dt!r} s (ratio {ratio!r})"
        )
    return m


def write_waveform_csv(path, wf: Waveform) -> None:
    lines = ["t,v"]
    lines.extend(f"{t:.17g},{v:.17g}" for t, v in zip(wf.t, wf.samples))
    Path(path).write_text("\n".join(lines) + "\n")


def read_waveform_csv(path) -> Waveform:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t, v = data[:, 0], data[:, 1]
    dt = float(t[1] - t[0]) if len(t) > 1 else 1.0
    return Waveform(dt, v, float(t[0]))
