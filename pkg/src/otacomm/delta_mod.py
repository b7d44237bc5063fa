"""Linear delta modulation: discrete accumulator model and OTA-C circuit loop."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import DM_GM_RANGE, OtaParams, QuantizerParams, two_level_quantize
from .signals import BitStream, Waveform, pulse_shape, samples_per_period

# symbol periods excluded from measurements while the loop leaves its zero state
ACQUISITION_SYMBOLS = 4
MIN_SAMPLES_PER_SYMBOL = 32


@dataclass(frozen=True)
class DmConfig:
    fm: float  # Hz, input tone
    fs: float  # Hz, sampling clock of the S1 switch
    gm3: float  # A/V, integrator OTA
    C1: float  # F, integrator capacitor
    V: float = 1.0  # quantizer output level
    dt: float | None = None  # simulation step, defaults to Ts/32
    enforce_gm_range: bool = False

    def __post_init__(self):
        for name in ("fm", "fs", "C1"):
            val = getattr(self, name)
            if not math.isfinite(val) or val <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {val!r}")
        ota = OtaParams(self.gm3)
        if self.enforce_gm_range:
            ota.check_range(DM_GM_RANGE)
        QuantizerParams(self.V)
        if self.fs <= 2 * self.fm:
            raise ValueError(f"fs={self.fs!r} Hz must exceed 2*fm={2 * self.fm!r} Hz")
        if self.dt is None:
            object.__setattr__(self, "dt", self.Ts / MIN_SAMPLES_PER_SYMBOL)
        m = samples_per_period(self.Ts, self.dt, "symbol period Ts")
        if m < MIN_SAMPLES_PER_SYMBOL:
            raise ValueError(f"need dt <= Ts/{MIN_SAMPLES_PER_SYMBOL}, got Ts/dt = {m}")
        if m % 2:
            raise ValueError(f"Ts/dt must be even so the half-period gate lands on the grid, got {m}")

    @classmethod
    def from_oversampling(cls, fm: float, k: int, gm3: float, C1: float, V: float = 1.0,
                          samples_per_symbol: int = MIN_SAMPLES_PER_SYMBOL,
                          enforce_gm_range: bool = False) -> "DmConfig":
        """Build with ``fs = 2 k fm``."""
        if int(k) != k or k < 2:
            raise ValueError(f"oversampling factor k must be an integer >= 2, got {k!r}")
        fs = 2 * int(k) * fm
        return cls(fm=fm, fs=fs, gm3=gm3, C1=C1, V=V, dt=1.0 / fs / samples_per_symbol,
                   enforce_gm_range=enforce_gm_range)

    @property
    def Ts(self) -> float:
        return 1.0 / self.fs

    @property
    def k(self) -> float:
        return self.fs / (2 * self.fm)

    @property
    def samples_per_symbol(self) -> int:
        return int(round(self.Ts / self.dt))

    @property
    def delta(self) -> float:
        return dm_step_size(self)


@dataclass(frozen=True)
class DmOutput:
    bits: BitStream
    staircase: Waveform
    error: Waveform


def dm_step_size(cfg: DmConfig) -> float:
    """Staircase step: charge gm3*V over half a symbol period into C1."""
    return cfg.gm3 * cfg.V * cfg.Ts / (2 * cfg.C1)


def dm_encode_reference(input_sampled, delta: float):
    """Textbook DM on already-sampled input.

    Returns ``(bits, staircase)`` with ``staircase[k] = staircase[k-1] + delta*bits[k]``
    starting from zero; ties go to +1.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    x = np.asarray(input_sampled, dtype=float)
    if x.size == 0:
        raise ValueError("input is empty")
    bits = np.empty(x.size, dtype=np.int8)
    stair = np.empty(x.size)
    m = 0.0
    for k, xk in enumerate(x):
        d = 1 if xk >= m else -1
        m = m + delta * d
        bits[k] = d
        stair[k] = m
    return bits, stair


def dm_decode(bits: BitStream, delta: float) -> np.ndarray:
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    return delta * np.cumsum(bits.symbols.astype(float))


class FixedGm:
    """Constant integrator transconductance."""

    def __init__(self, gm: float):
        self.gm = gm

    def update(self, v: float) -> float:
        return self.gm


def run_loop(cfg: DmConfig, controller, *, input: Waveform | None = None,
             bits: BitStream | None = None):
    """Closed DM loop on the simulation grid.

    Exactly one of ``input`` (encoder: comparator decides each symbol) or
    ``bits`` (decoder: symbols are given) must be provided. ``controller.update``
    sees the integrator output each step and returns gm3 for that step.

    Returns ``(symbols, staircase, gm_trace)`` as numpy arrays.
    """
    if (input is None) == (bits is None):
        raise ValueError("provide exactly one of input or bits")
    spp = cfg.samples_per_symbol
    Ts, dt, C1 = cfg.Ts, cfg.dt, cfg.C1
    q = QuantizerParams(cfg.V)
    # integrator drive is on for the first half of each symbol only
    gate = pulse_shape((np.arange(spp) / spp) * Ts, Ts).tolist()

    if input is not None:
        x = input.samples.tolist()
        n = len(x)
        symbols = np.empty(-(-n // spp), dtype=np.int8)
    else:
        symbols = np.array(bits.symbols, dtype=np.int8)
        n = len(symbols) * spp

    stair = np.empty(n)
    gm_trace = np.empty(n)
    v = 0.0
    s = 0.0
    for i in range(n):
        j = i % spp
        if j == 0:
            sym = i // spp
            if input is not None:
                s = two_level_quantize(q, x[i], v)
                symbols[sym] = 1 if s > 0 else -1
            else:
                s = q.V * int(symbols[sym])
        gm = controller.update(v)
        stair[i] = v
        gm_trace[i] = gm
        v = v + (gm / C1) * (s * gate[j]) * dt
    return symbols, stair, gm_trace


def _check_input(cfg: DmConfig, input: Waveform) -> None:
    if abs(input.dt - cfg.dt) > 1e-12 * cfg.dt:
        raise ValueError(f"input dt={input.dt!r} s does not match config dt={cfg.dt!r} s")
    if input.duration < 3 * cfg.Ts * (1 - 1e-12):
        raise ValueError(f"input lasts {input.duration!r} s, need at least 3*Ts={3 * cfg.Ts!r} s")


def dm_encode_circuit(cfg: DmConfig, input: Waveform) -> DmOutput:
    _check_input(cfg, input)
    symbols, stair, _ = run_loop(cfg, FixedGm(cfg.gm3), input=input)
    staircase = input.with_samples(stair)
    return DmOutput(
        bits=BitStream(cfg.Ts, symbols),
        staircase=staircase,
        error=input.with_samples(input.samples - stair),
    )


def dm_decode_circuit(cfg: DmConfig, bits: BitStream, t0: float = 0.0) -> Waveform:
    """Receiver-side OTA-C integrator driven by the received bits."""
    _, stair, _ = run_loop(cfg, FixedGm(cfg.gm3), bits=bits)
    return Waveform(cfg.dt, stair, t0)


def sample_at_symbols(cfg: DmConfig, wf: Waveform) -> np.ndarray:
    """Values of ``wf`` at each sampling instant n*Ts."""
    return wf.samples[:: cfg.samples_per_symbol]
