"""Step extraction, overload detection, transfer sweeps and SQNR."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .compander import MuLawParams, bipolar, mu_compress, mu_expand
from .delta_mod import ACQUISITION_SYMBOLS
from .signals import Waveform, samples_per_period


@dataclass(frozen=True)
class StepStats:
    mean_step: float
    min_step: float
    max_step: float
    count: int

    def as_text(self) -> str:
        return "\n".join(f"{k} = {v!r}" for k, v in self.as_dict().items())

    def as_dict(self) -> dict:
        return {"mean_step": self.mean_step, "min_step": self.min_step,
                "max_step": self.max_step, "count": self.count}

    @staticmethod
    def csv_header() -> str:
        return "mean_step,min_step,max_step,count"

    def csv_row(self) -> str:
        return f"{self.mean_step:.17g},{self.min_step:.17g},{self.max_step:.17g},{self.count}"


@dataclass(frozen=True)
class TransferCurve:
    v_in: np.ndarray
    v_out: np.ndarray

    def __post_init__(self):
        if len(self.v_in) != len(self.v_out):
            raise ValueError("v_in and v_out lengths differ")
        if np.any(np.diff(self.v_in) <= 0):
            raise ValueError("v_in must be strictly increasing")

    @property
    def points(self):
        return list(zip(self.v_in.tolist(), self.v_out.tolist()))

    def to_csv(self, path) -> None:
        lines = ["v_in,v_out"]
        lines.extend(f"{a:.17g},{b:.17g}" for a, b in zip(self.v_in, self.v_out))
        Path(path).write_text("\n".join(lines) + "\n")


def measure_steps(staircase: Waveform, fs: float, *, zero_tol: float = 1e-9,
                  skip_symbols: int = ACQUISITION_SYMBOLS) -> StepStats:
    """Staircase change over each symbol period after the acquisition window.

    A symbol's step is the value at its end minus the value at the end of the
    previous symbol; steps below ``zero_tol`` volts are treated as flat.
    """
    spp = samples_per_period(1.0 / fs, staircase.dt, "symbol period 1/fs")
    if len(staircase) < 4 * spp:
        raise ValueError(f"staircase too short: need at least {4 * spp} samples (4/fs)")
    ends = staircase.samples[::spp]
    steps = np.abs(np.diff(ends))[skip_symbols:]
    steps = steps[steps > zero_tol]
    if steps.size == 0:
        raise ValueError("no nonzero steps after the acquisition window")
    lo, hi = float(steps.min()), float(steps.max())
    # the float mean of equal values can land an ulp outside [min, max]
    mean = min(max(float(steps.mean()), lo), hi)
    return StepStats(mean, lo, hi, int(steps.size))


def _skip_samples(wf: Waveform, fs: float | None, skip_symbols: int) -> int:
    if fs is None:
        return 0
    return min(len(wf), int(math.ceil(skip_symbols / fs / wf.dt - 1e-9)))


def detect_slope_overload(input: Waveform, staircase: Waveform, delta: float, fs: float,
                          skip_symbols: int = ACQUISITION_SYMBOLS) -> bool:
    """True when the tracking error exceeds 2*delta anywhere after acquisition."""
    if not input.same_grid(staircase):
        raise ValueError("input and staircase are on different grids")
    k = _skip_samples(input, fs, skip_symbols)
    err = np.abs(input.samples[k:] - staircase.samples[k:])
    return bool(err.size and err.max() > 2 * delta)


def sweep_transfer(system, v_min: float, v_max: float, n_points: int) -> TransferCurve:
    if not v_min < v_max:
        raise ValueError(f"need v_min < v_max, got {v_min!r}, {v_max!r}")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    v_in = np.linspace(v_min, v_max, n_points)
    v_out = np.array([system(float(v)) for v in v_in])
    return TransferCurve(v_in, v_out)


def uniform_quantize(v, levels: int, full_scale: float):
    """Midrise quantizer: ``levels`` cells over [-full_scale, full_scale], output the cell centre."""
    if levels < 2 or int(levels) != levels:
        raise ValueError(f"levels must be an integer >= 2, got {levels!r}")
    if not full_scale > 0:
        raise ValueError(f"full_scale must be > 0, got {full_scale!r}")
    step = 2.0 * full_scale / levels
    x = np.clip(np.asarray(v, dtype=float), -full_scale, full_scale)
    idx = np.clip(np.floor((x + full_scale) / step), 0, levels - 1)
    out = -full_scale + (idx + 0.5) * step
    return float(out) if out.ndim == 0 else out


def sqnr_db(signal: Waveform, reconstructed: Waveform, fs: float | None = None,
            skip_symbols: int = ACQUISITION_SYMBOLS) -> float:
    """10 log10(signal power / error power); ``inf`` when reconstruction is exact.

    With ``fs`` given, the first ``skip_symbols`` symbol periods are ignored.
    """
    if not signal.same_grid(reconstructed):
        raise ValueError("signal and reconstruction are on different grids")
    k = _skip_samples(signal, fs, skip_symbols)
    s = signal.samples[k:]
    e = s - reconstructed.samples[k:]
    ps = float(np.sum(s * s))
    if ps == 0:
        raise ValueError("signal power is zero")
    pe = float(np.sum(e * e))
    if pe == 0:
        return math.inf
    return 10.0 * math.log10(ps / pe)


def companded_quantize(x, mu: float, levels: int, full_scale: float = 1.0):
    """Compress (mu-law), quantize uniformly, expand. Bipolar via sign-magnitude."""
    p = MuLawParams(mu)
    x = np.asarray(x, dtype=float)
    w = bipolar(mu_compress, p, np.clip(x / full_scale, -1, 1))
    wq = uniform_quantize(w, levels, 1.0)
    return full_scale * np.asarray(bipolar(mu_expand, p, np.clip(wq, -1, 1)))
