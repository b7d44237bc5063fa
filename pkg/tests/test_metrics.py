import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from otacomm.blocks import DiodeParams, OtaParams
from otacomm.compander import (
    CompressorCircuit,
    ExpanderCircuit,
    compressor_circuit_dc,
    expander_circuit_dc,
)
from otacomm.delta_mod import DmConfig, dm_encode_circuit
from otacomm.metrics import (
    StepStats,
    TransferCurve,
    companded_quantize,
    detect_slope_overload,
    measure_steps,
    sqnr_db,
    sweep_transfer,
    uniform_quantize,
)
from otacomm.signals import Waveform, sine


def staircase_from_steps(steps, spp, dt):
    levels = np.concatenate([[0.0], np.cumsum(steps)])
    return Waveform(dt, np.repeat(levels, spp))


def test_step_stats_text_and_csv():
    s = StepStats(0.25, 0.2, 0.3, 7)
    assert s.as_text().splitlines()[0] == "mean_step = 0.25"
    assert StepStats.csv_header() == "mean_step,min_step,max_step,count"
    assert s.csv_row() == "0.25,0.20000000000000001,0.29999999999999999,7"


def test_uniform_staircase_exact():
    spp, dt = 32, 1e-9 / 32
    st_wf = staircase_from_steps(np.tile([0.25, -0.25], 20), spp, dt)
    s = measure_steps(st_wf, 1e9)
    assert s.mean_step == s.min_step == s.max_step == pytest.approx(0.25, abs=1e-15)
    assert s.count == 40 - 4


@given(st.lists(st.floats(0.01, 2.0), min_size=5, max_size=40), st.integers(0, 2**16))
def test_known_steps_recovered(mags, seed):
    rng = np.random.default_rng(seed)
    steps = np.array(mags) * rng.choice([-1, 1], len(mags))
    spp, dt = 32, 1e-9 / 32
    s = measure_steps(staircase_from_steps(steps, spp, dt), 1e9)
    tail = np.abs(steps[4:])
    # steps are recovered to roundoff of the running sum
    assert s.count == len(tail)
    assert s.min_step == pytest.approx(tail.min(), abs=1e-12)
    assert s.max_step == pytest.approx(tail.max(), abs=1e-12)
    assert s.mean_step == pytest.approx(tail.mean(), abs=1e-12)
    assert s.min_step <= s.mean_step <= s.max_step


def test_flat_steps_ignored_and_short_rejected():
    spp, dt = 32, 1e-9 / 32
    s = measure_steps(staircase_from_steps([0.1] * 5 + [0.0, 0.3, 0.0], spp, dt), 1e9)
    assert s.count == 2 and s.max_step == pytest.approx(0.3)
    with pytest.raises(ValueError, match="short"):
        measure_steps(Waveform(dt, np.zeros(3 * spp)), 1e9)
    with pytest.raises(ValueError):
        measure_steps(Waveform(dt, np.zeros(10 * spp)), 1e9)


def test_measure_steps_on_dm():
    cfg = DmConfig(fm=10e6, fs=100e6, gm3=100e-6, C1=2e-12)
    out = dm_encode_circuit(cfg, sine(0.5, 10e6, dt=cfg.dt, duration=1e-6))
    assert measure_steps(out.staircase, cfg.fs).mean_step == pytest.approx(0.25, rel=0.02)


def test_overload_identity_false_and_grid_check():
    x = sine(1.0, 1e6, dt=1e-9, duration=1e-6)
    assert not detect_slope_overload(x, x, 0.01, 1e8)
    with pytest.raises(ValueError):
        detect_slope_overload(x, Waveform(2e-9, x.samples), 0.01, 1e8)


@given(st.integers(5, 16), st.floats(0.05, 0.5), st.floats(2.0, 5.0), st.floats(0, 2 * math.pi))
def test_overload_dichotomy(k, slow, fast, phase):
    cfg = DmConfig.from_oversampling(10e6, k, 100e-6, 1.25e-12)
    a_ov = cfg.delta * cfg.fs / (2 * math.pi * cfg.fm)
    for factor, expect in [(slow, False), (fast, True)]:
        x = sine(factor * a_ov, cfg.fm, phase, dt=cfg.dt, duration=3 / cfg.fm)
        st_wf = dm_encode_circuit(cfg, x).staircase
        assert detect_slope_overload(x, st_wf, cfg.delta, cfg.fs) is expect


def test_sweep_transfer_shapes():
    ident = sweep_transfer(lambda v: v, -1, 1, 11)
    assert all(a == b for a, b in ident.points)
    c = CompressorCircuit(OtaParams(10e-3), DiodeParams(28.5e-6))
    comp = sweep_transfer(lambda v: compressor_circuit_dc(c, v), 0, 2.5, 256)
    assert len(comp.points) == 256
    assert np.all(np.diff(comp.v_out) > 0) and np.all(np.diff(comp.v_out, 2) < 0)
    e = ExpanderCircuit(1e-3, 10e-3, 1e-3, DiodeParams(28.5e-6, n=1.0))
    exp = sweep_transfer(lambda v: expander_circuit_dc(e, v), 0, 0.15, 64)
    assert np.all(np.diff(exp.v_out) > 0) and np.all(np.diff(exp.v_out, 2) > 0)
    with pytest.raises(ValueError):
        sweep_transfer(lambda v: v, 1, 1, 5)
    with pytest.raises(ValueError):
        sweep_transfer(lambda v: v, 0, 1, 1)


def test_transfer_curve_csv(tmp_path):
    tc = TransferCurve(np.array([0.0, 0.5]), np.array([0.0, 0.1]))
    p = tmp_path / "t.csv"
    tc.to_csv(p)
    assert p.read_text().splitlines() == ["v_in,v_out", "0,0", "0.5,0.10000000000000001"]
    with pytest.raises(ValueError):
        TransferCurve(np.array([0.0, 0.0]), np.array([1.0, 2.0]))


def test_uniform_quantize_examples():
    assert uniform_quantize(0.3, 2, 1.0) == 0.5
    assert uniform_quantize(-0.3, 2, 1.0) == -0.5
    assert uniform_quantize(5.0, 4, 1.0) == 0.75
    mids = -1 + (np.arange(8) + 0.5) * 0.25
    np.testing.assert_array_equal(uniform_quantize(mids, 8, 1.0), mids)
    with pytest.raises(ValueError):
        uniform_quantize(0.1, 1, 1.0)
    with pytest.raises(ValueError):
        uniform_quantize(0.1, 4, 0.0)


@given(st.floats(-2, 2), st.integers(2, 1024), st.floats(0.1, 2))
def test_uniform_quantize_half_cell_bound(v, levels, fs):
    v = max(-fs, min(fs, v))
    assert abs(uniform_quantize(v, levels, fs) - v) <= fs / levels * (1 + 1e-12)


def _tone(amp, n=20000):
    # incommensurate frequency so samples cover the whole cycle
    t = np.arange(n)
    return Waveform(1.0, amp * np.sin(2 * np.pi * 0.0123456789 * t))


def test_sqnr_basic():
    x = _tone(1.0)
    assert sqnr_db(x, x) == math.inf
    assert sqnr_db(x, x.with_samples(np.zeros(len(x)))) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        sqnr_db(x.with_samples(np.zeros(len(x))), x)
    with pytest.raises(ValueError):
        sqnr_db(x, Waveform(2.0, x.samples))


def test_sqnr_skips_acquisition():
    x = Waveform(1e-9, np.ones(100))
    y = x.samples.copy()
    y[:10] = 0.0
    assert sqnr_db(x, x.with_samples(y)) < 20
    assert sqnr_db(x, x.with_samples(y), fs=4e8) == math.inf  # 4 symbols = 10 samples


def test_full_scale_uniform_sqnr():
    x = _tone(1.0)
    got = sqnr_db(x, x.with_samples(uniform_quantize(x.samples, 256, 1.0)))
    assert got == pytest.approx(6.02 * 8 + 1.76, abs=0.5)


def _sqnr_pair(amp):
    x = _tone(amp)
    uni = sqnr_db(x, x.with_samples(uniform_quantize(x.samples, 256, 1.0)))
    comp = sqnr_db(x, x.with_samples(companded_quantize(x.samples, 255, 256)))
    return uni, comp


def test_companding_gain_at_low_level():
    uni, comp = _sqnr_pair(0.01)
    assert comp - uni >= 10


def test_companded_sqnr_nearly_constant():
    amps = np.logspace(-2, 0, 9)
    pairs = [_sqnr_pair(a) for a in amps]
    uni = [p[0] for p in pairs]
    comp = [p[1] for p in pairs]
    assert max(comp) - min(comp) < 6
    assert max(uni) - min(uni) == pytest.approx(40, abs=3)


def test_companded_quantize_bounds():
    x = np.linspace(-1, 1, 101)
    y = companded_quantize(x, 255, 256)
    assert np.all(np.abs(y) <= 1)
    assert np.all(np.sign(y[x != 0]) == np.sign(x[x != 0]))
