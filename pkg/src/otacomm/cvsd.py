"""Continuously variable slope delta modulation.

The linear DM loop is reused; its integrator transconductance is steered by a
control path that rectifies the DC-blocked integrator output and smooths it
with a one-pole low-pass. A ramping staircase (slope overload) sits far from
its own running average, a hunting staircase does not, so the smoothed
magnitude separates the two regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import lowpass_alpha
from .delta_mod import DmConfig, _check_input, run_loop
from .signals import BitStream, Waveform

DEFAULT_LPF_RATIO = 50  # lpf_fc = fs / 50
OVERLOAD_SYMBOLS = 20  # sustained overload reaches 0.9 gm_max within this many symbols


class SlopeController:
    """gm3 = clamp(gm_min + ctrl_gain * v_ctrl, gm_min, gm_max).

    ``v_ctrl`` is the low-passed magnitude of (integrator output minus its own
    low-passed copy). Both filters share the same cutoff.
    """

    def __init__(self, gm_min: float, gm_max: float, ctrl_gain: float, alpha: float,
                 gm_init: float):
        self.gm_min = gm_min
        self.gm_max = gm_max
        self.ctrl_gain = ctrl_gain
        self.alpha = alpha
        self.dc = 0.0
        self.ctrl = (gm_init - gm_min) / ctrl_gain if ctrl_gain > 0 else 0.0

    def update(self, v: float) -> float:
        a = self.alpha
        hp = v - self.dc
        self.dc += a * (v - self.dc)
        self.ctrl += a * (abs(hp) - self.ctrl)
        gm = self.gm_min + self.ctrl_gain * self.ctrl
        return min(max(gm, self.gm_min), self.gm_max)


def overload_patterns(base: DmConfig, n_symbols: int) -> list[np.ndarray]:
    """Bit patterns of a fully slope-overloaded modulator.

    A DC ramp gives one unbroken run; a large tone at ``base.fm`` gives runs
    that reverse every half period of the tone.
    """
    n = np.arange(n_symbols)
    tone = np.where(np.sin(2 * np.pi * base.fm * n * base.Ts) >= 0, 1, -1)
    return [np.ones(n_symbols, dtype=np.int8), tone.astype(np.int8)]


def _gm_after(base: DmConfig, pattern: np.ndarray, gm_min: float, gm_max: float,
              ctrl_gain: float, lpf_fc: float) -> float:
    ctl = SlopeController(gm_min, gm_max, ctrl_gain, lowpass_alpha(lpf_fc, base.dt), gm_min)
    _, _, gm = run_loop(base, ctl, bits=BitStream(base.Ts, pattern))
    return float(gm[-1])


def default_ctrl_gain(base: DmConfig, gm_min: float, gm_max: float, lpf_fc: float,
                      n_symbols: int = OVERLOAD_SYMBOLS) -> float:
    """Smallest control gain with which every sustained-overload pattern,
    starting from gm_min, lifts gm3 to 0.9*gm_max within ``n_symbols`` symbols."""
    target = 0.9 * gm_max
    if target <= gm_min:
        return 0.0
    patterns = overload_patterns(base, n_symbols)

    def reaches(g):
        return all(_gm_after(base, p, gm_min, gm_max, g, lpf_fc) >= target for p in patterns)

    lo, hi = 0.0, 1e-6
    while not reaches(hi):
        lo, hi = hi, hi * 4
        if hi > 1e6:
            raise ValueError("no finite control gain reaches the overload target")
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class CvsdConfig:
    base: DmConfig
    gm_min: float
    gm_max: float
    ctrl_gain: float | None = None  # (A/V) per volt of control signal
    lpf_fc: float | None = None  # Hz

    def __post_init__(self):
        if not (math.isfinite(self.gm_min) and math.isfinite(self.gm_max)):
            raise ValueError("gm_min and gm_max must be finite")
        if not 0 < self.gm_min <= self.gm_max:
            raise ValueError(f"need 0 < gm_min <= gm_max, got {self.gm_min!r}, {self.gm_max!r}")
        if not self.gm_min <= self.base.gm3 <= self.gm_max:
            raise ValueError(f"base gm3={self.base.gm3!r} outside [gm_min, gm_max]")
        if self.lpf_fc is None:
            object.__setattr__(self, "lpf_fc", self.base.fs / DEFAULT_LPF_RATIO)
        if not 0 < self.lpf_fc < self.base.fs / 10:
            raise ValueError(f"lpf_fc={self.lpf_fc!r} Hz must lie in (0, fs/10)")
        if self.ctrl_gain is None:
            gain = default_ctrl_gain(self.base, self.gm_min, self.gm_max, self.lpf_fc)
            object.__setattr__(self, "ctrl_gain", gain)
        if not math.isfinite(self.ctrl_gain) or self.ctrl_gain < 0:
            raise ValueError(f"ctrl_gain must be finite and >= 0, got {self.ctrl_gain!r}")

    @property
    def step_min(self) -> float:
        return self.step_for(self.gm_min)

    @property
    def step_max(self) -> float:
        return self.step_for(self.gm_max)

    def step_for(self, gm):
        b = self.base
        return gm * b.V * b.Ts / (2 * b.C1)

    def controller(self) -> SlopeController:
        return SlopeController(self.gm_min, self.gm_max, self.ctrl_gain,
                               lowpass_alpha(self.lpf_fc, self.base.dt), self.base.gm3)


@dataclass(frozen=True)
class CvsdOutput:
    bits: BitStream
    staircase: Waveform
    gm_trace: Waveform
    step_trace: Waveform


def cvsd_encode(cfg: CvsdConfig, input: Waveform) -> CvsdOutput:
    _check_input(cfg.base, input)
    symbols, stair, gm = run_loop(cfg.base, cfg.controller(), input=input)
    return CvsdOutput(
        bits=BitStream(cfg.base.Ts, symbols),
        staircase=input.with_samples(stair),
        gm_trace=input.with_samples(gm),
        step_trace=input.with_samples(cfg.step_for(gm)),
    )


def cvsd_decode(bits: BitStream, cfg: CvsdConfig, t0: float = 0.0) -> Waveform:
    """Rebuild the staircase by running the same adaptation on the received bits."""
    if len(bits) == 0:
        raise ValueError("bit stream is empty")
    _, stair, _ = run_loop(cfg.base, cfg.controller(), bits=bits)
    return Waveform(cfg.base.dt, stair, t0)
