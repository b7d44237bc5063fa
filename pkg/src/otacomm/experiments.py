"""Experiment definitions, presets and the runner behind the CLI."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .blocks import DiodeParams, OtaParams
from .compander import (
    CompressorCircuit,
    ExpanderCircuit,
    check_matched,
    compand_roundtrip,
    compressor_circuit_dc,
    compressor_closed_form,
    compressor_effective_mu,
    compressor_normalized,
    expander_circuit_dc,
)
from .cvsd import CvsdConfig, cvsd_decode, cvsd_encode
from .delta_mod import (
    ACQUISITION_SYMBOLS,
    DmConfig,
    dm_decode,
    dm_encode_circuit,
    dm_encode_reference,
    sample_at_symbols,
)
from .metrics import detect_slope_overload, measure_steps, sqnr_db, sweep_transfer
from .signals import Waveform, ramp, sine, write_waveform_csv
from .units import format_quantity, parse_quantity

EXPERIMENTS = ("dm", "cvsd", "compress", "expand", "roundtrip", "sweep")


class ConfigError(ValueError):
    """Malformed config text, unknown key or unparseable value (exit 2)."""


class ValidationError(ValueError):
    """Parameters parse but violate a physical invariant (exit 3)."""


class SimulationError(RuntimeError):
    """Failure while running a validated experiment (exit 4)."""


@dataclass(frozen=True)
class Param:
    kind: str  # "float", "int", "bool", "str"
    default: object
    help: str = ""

    def parse(self, text: str):
        text = text.strip()
        if self.kind == "float":
            if text.lower() == "none":
                return None
            return parse_quantity(text)
        if self.kind == "int":
            try:
                return int(text)
            except ValueError:
                raise ConfigError(f"expected an integer, got {text!r}") from None
        if self.kind == "bool":
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ConfigError(f"expected a boolean, got {text!r}")
        return text

    def render(self, value) -> str:
        if value is None:
            return "none"
        if self.kind == "float":
            return format_quantity(value)
        if self.kind == "bool":
            return "true" if value else "false"
        return str(value)


_DM_COMMON = {
    "fm": Param("float", 10e6, "input tone frequency [Hz]"),
    "k": Param("int", 8, "oversampling factor, fs = 2 k fm"),
    "fs": Param("float", None, "sampling frequency override [Hz]"),
    "V": Param("float", 1.0, "quantizer level [V]"),
    "C1": Param("float", 1.25e-12, "integrator capacitor [F]"),
    "samples_per_symbol": Param("int", 32, "simulation steps per symbol period"),
    "amplitude": Param("float", 0.5, "input tone amplitude [V]"),
    "phase": Param("float", 0.0, "input tone phase [rad]"),
    "cycles": Param("int", 10, "input duration in tone periods"),
    "noise_rms": Param("float", 0.0, "seeded additive input noise [V rms]"),
    "enforce_gm_range": Param("bool", False, "require 70-120 uA/V integrator gm"),
}

SCHEMAS: dict[str, dict[str, Param]] = {
    "dm": {**_DM_COMMON, "gm3": Param("float", 100e-6, "integrator OTA gm [A/V]")},
    "cvsd": {
        **_DM_COMMON,
        "gm3": Param("float", None, "initial integrator gm [A/V], default gm_min"),
        "gm_min": Param("float", 72e-6, "lower gm clamp [A/V]"),
        "gm_max": Param("float", 162e-6, "upper gm clamp [A/V]"),
        "ctrl_gain": Param("float", None, "control gain [(A/V)/V], default calibrated"),
        "lpf_fc": Param("float", None, "control low-pass cutoff [Hz], default fs/50"),
        "amplitude_quiet": Param("float", None, "tone amplitude outside the burst [V]"),
        "burst_start": Param("int", 0, "burst start [tone periods]"),
        "burst_stop": Param("int", 0, "burst stop [tone periods], 0 = no burst"),
    },
    "compress": {
        "gm": Param("float", 10e-3, "input OTA gm [A/V]"),
        "Is": Param("float", 28.5e-6, "diode saturation current [A]"),
        "n": Param("float", 2.0, "diode emission coefficient"),
        "T": Param("float", 300.0, "temperature [K]"),
        "v_start": Param("float", 0.0, "ramp start [V]"),
        "v_end": Param("float", 2.5, "ramp end [V]"),
        "duration": Param("float", 1e-3, "ramp duration [s]"),
        "n_points": Param("int", 256, "ramp samples"),
        "reported_mu": Param("float", None, "reference mu for comparison"),
        "enforce_gm_range": Param("bool", False, "require 1-50 mA/V gm"),
    },
    "expand": {
        "gm1": Param("float", 10e-3, "input OTA gm [A/V]"),
        "gm2": Param("float", 10e-3, "output OTA gm [A/V]"),
        "gm3": Param("float", 10e-3, "scaling OTA gm [A/V]"),
        "Is": Param("float", 28.5e-6, "diode saturation current [A]"),
        "n": Param("float", 1.0, "diode emission coefficient"),
        "T": Param("float", 300.0, "temperature [K]"),
        "v_start": Param("float", 0.0, "ramp start [V]"),
        "v_end": Param("float", 0.15, "ramp end [V]"),
        "duration": Param("float", 1e-3, "ramp duration [s]"),
        "n_points": Param("int", 256, "ramp samples"),
    },
    "roundtrip": {
        "gm": Param("float", 10e-3, "compressor OTA gm [A/V]"),
        "Is": Param("float", 28.5e-6, "diode saturation current [A]"),
        "n": Param("float", 2.0, "diode emission coefficient"),
        "T": Param("float", 300.0, "temperature [K]"),
        "gm1": Param("float", None, "expander gm1 [A/V], default gm"),
        "gm2": Param("float", None, "expander gm2 [A/V], default gm"),
        "gm3": Param("float", None, "expander gm3 [A/V], default gm1"),
        "amplitude": Param("float", 2.5, "test tone amplitude [V]"),
        "frequency": Param("float", 1e3, "test tone frequency [Hz]"),
        "duration": Param("float", 2e-3, "duration [s]"),
        "n_points": Param("int", 512, "samples"),
        "full_scale": Param("float", 2.5, "full scale for the error floor [V]"),
    },
    "sweep": {
        "of": Param("str", "compress", "experiment run at each point"),
        "points": Param("str", "", "points separated by ';', each a comma list of key=value"),
        "workers": Param("int", 4, "concurrent points"),
    },
}


@dataclass(frozen=True)
class Preset:
    experiment: str
    params: dict
    anchor: str
    reference: dict = field(default_factory=dict)


_TABLE1 = [("10mA/V", "28.5uA", 350), ("9mA/V", "39.5uA", 230), ("8mA/V", "39.5uA", 204)]

PRESETS: dict[str, Preset] = {
    "paper-fig7": Preset(
        "dm",
        {"fm": "10MHz", "k": "8", "gm3": "100uA/V", "C1": "1.25pF", "V": "1",
         "amplitude": "0.5", "phase": "0.3", "cycles": "10"},
        "linear DM output, 10 MHz tone, 250 mV step",
        {"step": 0.25},
    ),
    "paper-fig8": Preset(
        "cvsd",
        {"fm": "10MHz", "fs": "90MHz", "C1": "1pF", "gm_min": "72uA/V", "gm_max": "162uA/V",
         "V": "1", "amplitude": "1.5", "amplitude_quiet": "0.2", "burst_start": "15",
         "burst_stop": "40", "cycles": "60"},
        "adaptive DM, 10 MHz tone, 90 MHz clock, step 0.4 V to 0.9 V",
        {"min_step": 0.4, "max_step": 0.9},
    ),
    "paper-fig5": Preset(
        "sweep",
        {"of": "compress",
         "points": "; ".join(f"gm={g},Is={i},reported_mu={m}" for g, i, m in _TABLE1)},
        "compressor output at the three tuning points, 0-2.5 V ramp over 1 ms",
    ),
    "paper-fig6": Preset(
        "expand",
        {"gm1": "10mA/V", "gm2": "10mA/V", "gm3": "10mA/V", "Is": "28.5uA", "n": "1",
         "v_end": "0.15"},
        "expander output characteristic",
    ),
    "mu255": Preset(
        "compress",
        {"gm": "10.2mA/V", "Is": "40uA", "reported_mu": "255"},
        "classic mu = 255 (gm/Is = 10.2 mA/V / 40 uA)",
        {"mu": 255.0},
    ),
}
for _i, (_g, _is, _m) in enumerate(_TABLE1, start=1):
    PRESETS[f"paper-table1-row{_i}"] = Preset(
        "compress", {"gm": _g, "Is": _is, "reported_mu": str(_m)},
        f"compressor tuning point {_i}: gm={_g}, Is={_is}, reference mu={_m}", {"mu": float(_m)},
    )


def list_presets() -> str:
    lines = []
    for name in sorted(PRESETS):
        p = PRESETS[name]
        params = ", ".join(f"{k}={v}" for k, v in p.params.items())
        lines.append(f"{name}  [{p.experiment}]  {p.anchor}\n    {params}")
    return "\n".join(lines)


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value
    return out


def load_config_file(path) -> tuple[str | None, dict[str, str], int | None]:
    """Returns (experiment or None, raw params, seed or None). JSON files are run manifests."""
    text = Path(path).read_text()
    if str(path).endswith(".json"):
        try:
            manifest = json.loads(text)
            return manifest["experiment"], dict(manifest["parameters"]), manifest.get("seed")
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: not a run manifest ({exc})") from None
    return None, parse_config_text(text), None


def resolve_params(experiment: str, raw: dict[str, str]) -> dict:
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    schema = SCHEMAS[experiment]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {experiment}: {', '.join(unknown)}")
    params = {k: p.default for k, p in schema.items()}
    for key, text in raw.items():
        try:
            params[key] = schema[key].parse(str(text))
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return params


def render_params(experiment: str, params: dict) -> dict[str, str]:
    schema = SCHEMAS[experiment]
    return {k: schema[k].render(params[k]) for k in schema}


@dataclass
class RunResult:
    summary: dict
    derived: dict
    files: list


# -- builders: turn resolved params into validated model objects ---------------

def _validated(build):
    try:
        return build()
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def build_dm(p: dict) -> DmConfig:
    def make():
        if p["fs"] is None:
            return DmConfig.from_oversampling(p["fm"], p["k"], p["gm3"], p["C1"], p["V"],
                                              p["samples_per_symbol"], p["enforce_gm_range"])
        fs = p["fs"]
        return DmConfig(fm=p["fm"], fs=fs, gm3=p["gm3"], C1=p["C1"], V=p["V"],
                        dt=1.0 / fs / p["samples_per_symbol"],
                        enforce_gm_range=p["enforce_gm_range"])
    return _validated(make)


def build_cvsd(p: dict) -> CvsdConfig:
    gm3 = p["gm_min"] if p["gm3"] is None else p["gm3"]
    base = build_dm({**p, "gm3": gm3})
    return _validated(lambda: CvsdConfig(base, p["gm_min"], p["gm_max"], p["ctrl_gain"], p["lpf_fc"]))


def _diode(p: dict) -> DiodeParams:
    return _validated(lambda: DiodeParams(p["Is"], p["n"], p["T"]))


def build_compressor(p: dict) -> CompressorCircuit:
    diode = _diode(p)
    return _validated(lambda: CompressorCircuit(OtaParams(p["gm"]), diode,
                                                p.get("enforce_gm_range", False)))


def build_expander(p: dict) -> ExpanderCircuit:
    diode = _diode(p)
    return _validated(lambda: ExpanderCircuit(p["gm1"], p["gm2"], p["gm3"], diode))


def _tone_input(p: dict, cfg: DmConfig, rng: np.random.Generator) -> Waveform:
    def make():
        if p["cycles"] < 1:
            raise ValueError("cycles must be >= 1")
        dur = p["cycles"] / cfg.fm
        if dur < 3 * cfg.Ts:
            raise ValueError("input shorter than three symbol periods")
        x = sine(1.0, cfg.fm, p["phase"], dt=cfg.dt, duration=dur)
        if p["noise_rms"] < 0:
            raise ValueError("noise_rms must be >= 0")
        return x
    x = _validated(make)
    env = np.full(len(x), p["amplitude"])
    quiet = p.get("amplitude_quiet")
    if quiet is not None and p.get("burst_stop", 0) > 0:
        cyc = x.t * cfg.fm
        env = np.where((cyc >= p["burst_start"]) & (cyc < p["burst_stop"]), p["amplitude"], quiet)
    samples = x.samples * env
    if p["noise_rms"] > 0:
        samples = samples + rng.normal(0.0, p["noise_rms"], len(samples))
    return x.with_samples(samples)


def _write_bits(path: Path, bits) -> None:
    lines = ["n,t,bit"]
    lines.extend(f"{i},{i * bits.Ts:.17g},{int(b)}" for i, b in enumerate(bits.symbols))
    path.write_text("\n".join(lines) + "\n")


def _run_dm(p, out: Path, rng) -> RunResult:
    cfg = build_dm(p)
    x = _tone_input(p, cfg, rng)
    res = dm_encode_circuit(cfg, x)
    stats = measure_steps(res.staircase, cfg.fs)
    ref_bits, _ = dm_encode_reference(sample_at_symbols(cfg, x), cfg.delta)
    tail = slice(ACQUISITION_SYMBOLS, None)
    mismatches = int(np.sum(ref_bits[tail] != res.bits.symbols[tail]))
    write_waveform_csv(out / "input.csv", x)
    write_waveform_csv(out / "staircase.csv", res.staircase)
    write_waveform_csv(out / "error.csv", res.error)
    _write_bits(out / "bits.csv", res.bits)
    (out / "steps.csv").write_text(stats.csv_header() + "\n" + stats.csv_row() + "\n")
    decoded = dm_decode(res.bits, cfg.delta)
    summary = {
        **stats.as_dict(),
        "delta_analytic": cfg.delta,
        "reference_bit_mismatches": mismatches,
        "slope_overload": detect_slope_overload(x, res.staircase, cfg.delta, cfg.fs),
        "sqnr_db": sqnr_db(x, res.staircase, cfg.fs),
        "decoded_final": float(decoded[-1]),
    }
    derived = {"fs": cfg.fs, "Ts": cfg.Ts, "dt": cfg.dt, "k": cfg.k, "delta": cfg.delta,
               "overload_amplitude": cfg.delta * cfg.fs / (2 * math.pi * cfg.fm)}
    return RunResult(summary, derived,
                     ["input.csv", "staircase.csv", "error.csv", "bits.csv", "steps.csv"])


def _run_cvsd(p, out: Path, rng) -> RunResult:
    cfg = build_cvsd(p)
    x = _tone_input(p, cfg.base, rng)
    res = cvsd_encode(cfg, x)
    stats = measure_steps(res.staircase, cfg.base.fs)
    decoded = cvsd_decode(res.bits, cfg)
    write_waveform_csv(out / "input.csv", x)
    write_waveform_csv(out / "staircase.csv", res.staircase)
    write_waveform_csv(out / "gm_trace.csv", res.gm_trace)
    write_waveform_csv(out / "step_trace.csv", res.step_trace)
    _write_bits(out / "bits.csv", res.bits)
    (out / "steps.csv").write_text(stats.csv_header() + "\n" + stats.csv_row() + "\n")
    summary = {
        **stats.as_dict(),
        "step_ratio": stats.max_step / stats.min_step,
        "decoder_max_abs_diff": float(np.max(np.abs(decoded.samples - res.staircase.samples))),
        "sqnr_db": sqnr_db(x, res.staircase, cfg.base.fs),
    }
    derived = {"fs": cfg.base.fs, "Ts": cfg.base.Ts, "dt": cfg.base.dt, "k": cfg.base.k,
               "gm3_initial": cfg.base.gm3, "ctrl_gain": cfg.ctrl_gain, "lpf_fc": cfg.lpf_fc,
               "step_min": cfg.step_min, "step_max": cfg.step_max}
    return RunResult(summary, derived,
                     ["input.csv", "staircase.csv", "gm_trace.csv", "step_trace.csv", "bits.csv",
                      "steps.csv"])


def _ramp_input(p) -> Waveform:
    def make():
        if p["n_points"] < 2:
            raise ValueError("n_points must be >= 2")
        if p["v_start"] < 0 or p["v_end"] <= p["v_start"]:
            raise ValueError("ramp must be non-negative and increasing (0 <= v_start < v_end)")
        return ramp(p["v_start"], p["v_end"], dt=p["duration"] / p["n_points"],
                    duration=p["duration"])
    return _validated(make)


def _run_compress(p, out: Path, rng) -> RunResult:
    c = build_compressor(p)
    x = _ramp_input(p)
    y = x.with_samples([compressor_circuit_dc(c, float(v)) for v in x.samples])
    curve = sweep_transfer(lambda v: compressor_circuit_dc(c, v), p["v_start"], p["v_end"],
                           p["n_points"])
    write_waveform_csv(out / "input.csv", x)
    write_waveform_csv(out / "output.csv", y)
    curve.to_csv(out / "transfer.csv")
    mu = compressor_effective_mu(c)
    summary = {
        "effective_mu": mu,
        "node_vs_closed_form_max_abs": float(np.max(np.abs(
            y.samples - compressor_closed_form(c, x.samples)))),
        "v_out_at_1V": compressor_circuit_dc(c, 1.0),
    }
    if p["reported_mu"] is not None:
        summary["reported_mu"] = p["reported_mu"]
        summary["mu_rel_diff"] = (mu - p["reported_mu"]) / p["reported_mu"]
    try:
        summary["normalized_at_half"] = compressor_normalized(c, 0.5)
    except ValueError as exc:
        summary["normalized_mode"] = f"unavailable: {exc}"
    derived = {"VT": c.diode.VT, "nVT": c.diode.nVT, "x_scale": c.x_scale,
               "ln_1_plus_mu": math.log1p(mu)}
    return RunResult(summary, derived, ["input.csv", "output.csv", "transfer.csv"])


def _run_expand(p, out: Path, rng) -> RunResult:
    e = build_expander(p)
    x = _ramp_input(p)
    y = x.with_samples([expander_circuit_dc(e, float(v)) for v in x.samples])
    curve = sweep_transfer(lambda v: expander_circuit_dc(e, v), p["v_start"], p["v_end"],
                           p["n_points"])
    write_waveform_csv(out / "input.csv", x)
    write_waveform_csv(out / "output.csv", y)
    curve.to_csv(out / "transfer.csv")
    summary = {"effective_mu": e.effective_mu, "v_out_max": float(y.samples.max())}
    derived = {"VT": e.diode.VT, "exponent_per_volt": (e.gm1 / e.gm3) / e.diode.nVT}
    return RunResult(summary, derived, ["input.csv", "output.csv", "transfer.csv"])


def _run_roundtrip(p, out: Path, rng) -> RunResult:
    c = build_compressor(p)
    gm1 = p["gm"] if p["gm1"] is None else p["gm1"]
    gm2 = p["gm"] if p["gm2"] is None else p["gm2"]
    gm3 = gm1 if p["gm3"] is None else p["gm3"]
    e = build_expander({**p, "gm1": gm1, "gm2": gm2, "gm3": gm3})
    _validated(lambda: check_matched(c, e))
    x = _validated(lambda: sine(p["amplitude"], p["frequency"], dt=p["duration"] / p["n_points"],
                                duration=p["duration"]))
    y = compand_roundtrip(c, e, x)
    mask = np.abs(x.samples) >= 0.05 * p["full_scale"]
    rel = np.abs(y.samples[mask] - x.samples[mask]) / np.abs(x.samples[mask])
    write_waveform_csv(out / "input.csv", x)
    write_waveform_csv(out / "output.csv", y)
    summary = {
        "effective_mu_compressor": compressor_effective_mu(c),
        "effective_mu_expander": e.effective_mu,
        "max_rel_error_above_5pct": float(rel.max()) if rel.size else 0.0,
        "correlation": float(np.corrcoef(x.samples, y.samples)[0, 1]),
    }
    return RunResult(summary, {"nVT": c.diode.nVT}, ["input.csv", "output.csv"])


def _parse_points(text: str) -> list[dict[str, str]]:
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        point = {}
        for item in chunk.split(","):
            if "=" not in item:
                raise ConfigError(f"sweep point item {item!r} is not key=value")
            k, v = (s.strip() for s in item.split("=", 1))
            point[k] = v
        points.append(point)
    if not points:
        raise ConfigError("sweep needs at least one point")
    return points


def _run_sweep(p, out: Path, rng, seed: int = 0) -> RunResult:
    inner = p["of"]
    if inner == "sweep" or inner not in SCHEMAS:
        raise ConfigError(f"sweep cannot run experiment {inner!r}")
    points = _parse_points(p["points"])
    resolved = [resolve_params(inner, pt) for pt in points]
    for r in resolved:  # validate every point before running any
        _validate_only(inner, r)
    if p["workers"] < 1:
        raise ValidationError("workers must be >= 1")

    def run_point(i):
        d = out / f"point_{i:02d}"
        d.mkdir(parents=True, exist_ok=True)
        res = RUNNERS[inner](resolved[i], d, np.random.default_rng(seed + i))
        write_summary(d / "summary.txt", res.summary)
        return res

    with ThreadPoolExecutor(max_workers=p["workers"]) as pool:
        results = list(pool.map(run_point, range(len(points))))
    pkeys = sorted({k for pt in points for k in pt})
    keys = sorted({k for r in results for k, v in r.summary.items()
                   if not isinstance(v, str) and k not in pkeys})
    lines = [",".join(["point", *pkeys, *keys])]
    for i, (pt, r) in enumerate(zip(points, results)):
        row = [str(i), *(pt.get(k, "") for k in pkeys),
               *(_fmt(r.summary.get(k, "")) for k in keys)]
        lines.append(",".join(row))
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    files = ["sweep.csv"] + [f"point_{i:02d}/{f}" for i, r in enumerate(results) for f in r.files]
    summary = {f"point_{i:02d}.{k}": v for i, r in enumerate(results) for k, v in r.summary.items()}
    return RunResult(summary, {"points": len(points)}, files)


def _validate_only(experiment: str, p: dict) -> None:
    if experiment == "dm":
        build_dm(p)
    elif experiment == "cvsd":
        build_cvsd(p)
    elif experiment == "compress":
        build_compressor(p)
    elif experiment == "expand":
        build_expander(p)
    elif experiment == "roundtrip":
        build_compressor(p)


RUNNERS = {
    "dm": _run_dm,
    "cvsd": _run_cvsd,
    "compress": _run_compress,
    "expand": _run_expand,
    "roundtrip": _run_roundtrip,
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.12g}"
    return str(v)


def write_summary(path: Path, summary: dict) -> None:
    Path(path).write_text("".join(f"{k} = {_fmt(v)}\n" for k, v in summary.items()))


def gnuplot_stub(experiment: str, files: list[str]) -> str:
    csvs = [f for f in files if f.endswith(".csv") and "bits" not in f and "steps" not in f
            and f != "sweep.csv"]
    plots = ", \\\n     ".join(f"'{f}' using 1:2 with lines title '{f}'" for f in csvs)
    return ("set datafile separator ','\nset key autotitle columnhead\n"
            f"set title '{experiment}'\nset grid\nplot {plots}\npause -1\n")


def run_experiment(experiment: str, params: dict, output_dir, seed: int = 0,
                   gnuplot: bool = False, preset: str | None = None) -> RunResult:
    """Run a resolved experiment, writing CSVs, ``summary.txt`` and ``manifest.json``."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    if experiment == "sweep":
        result = _run_sweep(params, out, rng, seed)
    else:
        result = RUNNERS[experiment](params, out, rng)
    summary = dict(result.summary)
    if preset and PRESETS[preset].reference:
        for k, v in PRESETS[preset].reference.items():
            summary[f"reported_{k}"] = v
    write_summary(out / "summary.txt", summary)
    manifest = {
        "experiment": experiment,
        "preset": preset,
        "parameters": render_params(experiment, params),
        "seed": seed,
        "version": __version__,
        "derived": {k: _json_value(v) for k, v in result.derived.items()},
        "files": result.files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if gnuplot:
        (out / "plot.gp").write_text(gnuplot_stub(experiment, result.files))
    result.summary = summary
    return result


def _json_value(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v
