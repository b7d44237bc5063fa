"""Behavioral models of the analog building blocks.

All elements are ideal: an OTA is a pure voltage-controlled current source,
the diode follows the Shockley law, the comparator has infinite gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .signals import Waveform, samples_per_period

K_BOLTZMANN = 1.381e-23  # J/K
Q_ELECTRON = 1.6e-19  # C

EXP_CLAMP = 60.0

# gm windows quoted for the two circuit families
DM_GM_RANGE = (70e-6, 120e-6)
COMPANDER_GM_RANGE = (1e-3, 50e-3)


class NoSolution(ValueError):
    """The diode node equation has no real solution for the requested current."""


class NonConvergence(RuntimeError):
    pass


def _finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite input {v!r}")


@dataclass(frozen=True)
class OtaParams:
    gm: float  # A/V

    def __post_init__(self):
        if not math.isfinite(self.gm) or self.gm <= 0:
            raise ValueError(f"gm must be finite and > 0, got {self.gm!r}")

    def check_range(self, gm_range: tuple[float, float]) -> "OtaParams":
        lo, hi = gm_range
        if not lo <= self.gm <= hi:
            raise ValueError(f"gm {self.gm!r} A/V outside allowed range [{lo!r}, {hi!r}]")
        return self


@dataclass(frozen=True)
class DiodeParams:
    Is: float  # A
    n: float = 2.0
    T: float = 300.0  # K

    def __post_init__(self):
        if not math.isfinite(self.Is) or self.Is <= 0:
            raise ValueError(f"Is must be finite and > 0, got {self.Is!r}")
        if not 1.0 <= self.n <= 2.0:
            raise ValueError(f"emission coefficient n must lie in [1, 2], got {self.n!r}")
        if not math.isfinite(self.T) or self.T <= 0:
            raise ValueError(f"T must be finite and > 0, got {self.T!r}")

    @property
    def VT(self) -> float:
        """Thermal voltage kT/q."""
        return K_BOLTZMANN * self.T / Q_ELECTRON

    @property
    def nVT(self) -> float:
        return self.n * self.VT


@dataclass(frozen=True)
class QuantizerParams:
    V: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.V) or self.V <= 0:
            raise ValueError(f"V must be finite and > 0, got {self.V!r}")


def ota_current(p: OtaParams, v_plus: float, v_minus: float = 0.0):
    v_plus = np.asarray(v_plus, dtype=float)
    v_minus = np.asarray(v_minus, dtype=float)
    if not (np.all(np.isfinite(v_plus)) and np.all(np.isfinite(v_minus))):
        raise ValueError("OTA inputs must be finite")
    out = p.gm * (v_plus - v_minus)
    return float(out) if out.ndim == 0 else out


def diode_current(d: DiodeParams, v):
    """Shockley current, exponent clamped to +-60 to stay finite."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("diode voltage must be finite")
    x = np.clip(v / d.nVT, -EXP_CLAMP, EXP_CLAMP)
    out = d.Is * np.expm1(x)
    return float(out) if out.ndim == 0 else out


def solve_diode_node(d: DiodeParams, i_in: float) -> float:
    """Node voltage at which the diode sinks exactly ``i_in``.

    Closed-form inverse of the Shockley law, ``n VT ln(1 + i/Is)``.
    """
    _finite(i_in)
    if i_in <= -d.Is:
        raise NoSolution(f"i_in={i_in!r} A is at or below -Is={-d.Is!r} A")
    return d.nVT * math.log1p(i_in / d.Is)


def solve_diode_node_bisect(d: DiodeParams, i_in: float, max_iter: int = 400) -> float:
    """Bisection on the diode law. Slow reference path for cross-checking."""
    _finite(i_in)
    if i_in <= -d.Is:
        raise NoSolution(f"i_in={i_in!r} A is at or below -Is={-d.Is!r} A")
    tol = max(1e-15, 1e-12 * abs(i_in))
    lo, hi = -EXP_CLAMP * d.nVT, EXP_CLAMP * d.nVT
    if diode_current(d, hi) < i_in:
        raise NoSolution(f"i_in={i_in!r} A beyond clamped diode range")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        r = diode_current(d, mid) - i_in
        if abs(r) <= tol or mid in (lo, hi):
            return mid
        if r < 0:
            lo = mid
        else:
            hi = mid
    raise NonConvergence(f"bisection did not converge for i_in={i_in!r}")


def integrate_ota_c(p: OtaParams, C: float, input: Waveform, v_init: float = 0.0) -> Waveform:
    """OTA driving a grounded capacitor: dv/dt = (gm / C) * input.

    Forward Euler; ``out[0] = v_init`` and ``out[i]`` is the capacitor voltage
    at ``t0 + i*dt`` having integrated ``input[:i]``.
    """
    if not math.isfinite(C) or C <= 0:
        raise ValueError(f"C must be finite and > 0, got {C!r}")
    if len(input) == 0:
        raise ValueError("input waveform is empty")
    _finite(v_init)
    incr = (p.gm / C) * input.samples[:-1] * input.dt
    out = np.empty(len(input))
    out[0] = v_init
    out[1:] = v_init + np.cumsum(incr)
    return input.with_samples(out)


def two_level_quantize(q: QuantizerParams, v_in: float, v_ref: float) -> float:
    """Comparator: +V when the input is at or above the reference, else -V."""
    _finite(v_in, v_ref)
    return q.V if v_in >= v_ref else -q.V


def sample_hold(input: Waveform, fs: float) -> Waveform:
    if not math.isfinite(fs) or fs <= 0:
        raise ValueError(f"fs must be finite and > 0, got {fs!r}")
    Ts = 1.0 / fs
    if Ts < input.dt * (1 - 1e-9):
        raise ValueError(f"sampling period 1/fs={Ts!r} s is shorter than dt={input.dt!r} s")
    try:
        m = samples_per_period(Ts, input.dt, "sampling period 1/fs")
    except ValueError as exc:
        raise ValueError(f"fs={fs!r} Hz incompatible with dt={input.dt!r} s: {exc}") from None
    idx = (np.arange(len(input)) // m) * m
    return input.with_samples(input.samples[idx])


def rectify(input: Waveform) -> Waveform:
    if len(input) == 0:
        raise ValueError("input waveform is empty")
    return input.with_samples(np.abs(input.samples))


def lowpass_alpha(fc: float, dt: float) -> float:
    if not (0 < fc < 1.0 / (2.0 * dt)):
        raise ValueError(f"cutoff fc={fc!r} Hz must lie in (0, {1.0 / (2.0 * dt)!r}) Hz")
    return 1.0 - math.exp(-2.0 * math.pi * fc * dt)


def lowpass_one_pole(input: Waveform, fc: float, v_init: float = 0.0) -> Waveform:
    """y[i] = y[i-1] + alpha * (x[i] - y[i-1]), y[-1] = v_init."""
    alpha = lowpass_alpha(fc, input.dt)
    y, _ = lfilter([alpha], [1.0, alpha - 1.0], input.samples, zi=[(1.0 - alpha) * v_init])
    return input.with_samples(y)
