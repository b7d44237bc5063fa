"""Mu-law compression and expansion: ideal curves and OTA + diode circuits.

The compressor is an OTA (gm) pushing ``gm * v_in`` into a grounded diode, so
the node settles at ``n VT ln(1 + gm v_in / Is)``: a mu-law curve with
``mu = gm / Is``. The expander scales its input by ``gm1 / gm3``, drives a
diode with it and reads the diode current back out through ``gm2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import (
    COMPANDER_GM_RANGE,
    EXP_CLAMP,
    K_BOLTZMANN,
    Q_ELECTRON,
    DiodeParams,
    OtaParams,
    solve_diode_node,
)
from .signals import Waveform

# q/(2kT) at 300 K, rounded; the normalized compressor is defined with it
NORMALIZED_MODE_CONSTANT = 19.23
NORMALIZED_MODE_TOLERANCE = 0.005


class CompanderMismatch(ValueError):
    """Compressor and expander are not inverse to each other."""


@dataclass(frozen=True)
class MuLawParams:
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.mu) or self.mu <= 0:
            raise ValueError(f"mu must be finite and > 0, got {self.mu!r}")

    @property
    def D(self) -> float:
        return math.log1p(self.mu)


MU255 = MuLawParams(255.0)


def _unit_interval(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def _scalar_or_array(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def mu_compress(p: MuLawParams, v):
    v = _unit_interval(v, "v")
    return _scalar_or_array(np.log1p(p.mu * v) / p.D)


def mu_expand(p: MuLawParams, w):
    w = _unit_interval(w, "w")
    return _scalar_or_array(np.expm1(p.D * w) / p.mu)


def bipolar(curve, p: MuLawParams, v):
    """Sign-magnitude extension of a unipolar curve to [-1, 1]."""
    v = np.asarray(v, dtype=float)
    return _scalar_or_array(np.sign(v) * np.asarray(curve(p, np.abs(v))))


@dataclass(frozen=True)
class CompressorCircuit:
    ota: OtaParams
    diode: DiodeParams
    enforce_gm_range: bool = False

    def __post_init__(self):
        if self.enforce_gm_range:
            self.ota.check_range(COMPANDER_GM_RANGE)

    @property
    def x_scale(self) -> float:
        """Divisor mapping a full-scale (1 V) input to a normalized output of 1."""
        return self.diode.nVT * math.log1p(compressor_effective_mu(self))


@dataclass(frozen=True)
class ExpanderCircuit:
    gm1: float
    gm2: float
    gm3: float
    diode: DiodeParams

    def __post_init__(self):
        for name in ("gm1", "gm2", "gm3"):
            OtaParams(getattr(self, name))

    @property
    def effective_mu(self) -> float:
        return self.gm2 / self.diode.Is


def compressor_effective_mu(c: CompressorCircuit) -> float:
    return c.ota.gm / c.diode.Is


def compressor_circuit_dc(c: CompressorCircuit, v_in: float) -> float:
    """Node voltage where the OTA output current equals the diode current."""
    if not math.isfinite(v_in) or v_in < 0:
        raise ValueError(f"v_in must be finite and >= 0, got {v_in!r}")
    return solve_diode_node(c.diode, c.ota.gm * v_in)


def compressor_closed_form(c: CompressorCircuit, v_in):
    return c.diode.nVT * np.log1p(np.asarray(v_in, dtype=float) * c.ota.gm / c.diode.Is)


def check_normalized_mode(c: CompressorCircuit) -> None:
    """The normalized form assumes q/(n k T) matches the rounded 19.23 V^-1."""
    k = 1.0 / c.diode.nVT
    if abs(k - NORMALIZED_MODE_CONSTANT) > NORMALIZED_MODE_TOLERANCE * NORMALIZED_MODE_CONSTANT:
        raise ValueError(
            f"q/(n k T) = {k:.4f} V^-1 deviates from {NORMALIZED_MODE_CONSTANT} by more than "
            f"{NORMALIZED_MODE_TOLERANCE:.1%} (n={c.diode.n}, T={c.diode.T} K)"
        )


def compressor_normalized(c: CompressorCircuit, v_in: float) -> float:
    check_normalized_mode(c)
    if not 0 <= v_in <= 1:
        raise ValueError(f"v_in must lie in [0, 1], got {v_in!r}")
    return compressor_circuit_dc(c, v_in) / c.x_scale


def expander_circuit_dc(e: ExpanderCircuit, v_in: float) -> float:
    """Solve both expander nodes.

    Node a: ``gm1 v_in = gm3 v_a``. Node b: ``gm2 v_out`` equals the diode
    current at ``v_a``.
    """
    if not math.isfinite(v_in) or v_in < 0:
        raise ValueError(f"v_in must be finite and >= 0, got {v_in!r}")
    v_a = (e.gm1 / e.gm3) * v_in
    x = v_a / e.diode.nVT
    if x > EXP_CLAMP:
        raise ValueError(f"expander exponent {x:.1f} exceeds {EXP_CLAMP}: unphysical operating point")
    return (e.diode.Is / e.gm2) * math.expm1(x)


def matched_expander(c: CompressorCircuit, gm1: float | None = None) -> ExpanderCircuit:
    """Expander that inverts ``c``: same diode, gm2 = gm, gm1 = gm3."""
    gm1 = c.ota.gm if gm1 is None else gm1
    return ExpanderCircuit(gm1=gm1, gm2=c.ota.gm, gm3=gm1, diode=c.diode)


def check_matched(c: CompressorCircuit, e: ExpanderCircuit, rel_tol: float = 0.01) -> None:
    mu_c, mu_e = compressor_effective_mu(c), e.effective_mu
    if abs(mu_c - mu_e) > rel_tol * mu_c:
        raise CompanderMismatch(f"effective mu differs: compressor {mu_c:.4g}, expander {mu_e:.4g}")
    scale = (e.gm1 / e.gm3) * c.diode.nVT / e.diode.nVT
    if abs(scale - 1.0) > rel_tol:
        raise CompanderMismatch(
            f"scale stages misaligned: (gm1/gm3) * nVT_c / nVT_e = {scale:.4g}, expected 1"
        )


def compand_roundtrip(c: CompressorCircuit, e: ExpanderCircuit, input: Waveform) -> Waveform:
    check_matched(c, e)
    x = input.samples
    mags = np.abs(x)
    out = np.empty_like(x)
    for i, m in enumerate(mags):
        out[i] = expander_circuit_dc(e, compressor_circuit_dc(c, float(m)))
    return input.with_samples(np.sign(x) * out)


def thermal_constant(n: float, T: float = 300.0) -> float:
    """q/(n k T) in V^-1; 19.31 for n=2 and 38.62 for n=1 at 300 K."""
    return Q_ELECTRON / (n * K_BOLTZMANN * T)
