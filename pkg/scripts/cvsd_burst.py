"""CVSD step adaptation on a tone burst, compared with linear DM at the minimum step.

Prints the step range and the reconstruction RMS error of both modulators.
"""

import argparse

import numpy as np

from otacomm.cvsd import CvsdConfig, cvsd_encode
from otacomm.delta_mod import ACQUISITION_SYMBOLS, DmConfig, dm_encode_circuit
from otacomm.metrics import measure_steps
from otacomm.signals import sine


def burst(cfg, loud, quiet, start, stop, cycles):
    x = sine(1.0, cfg.fm, dt=cfg.dt, duration=cycles / cfg.fm)
    env = np.where((x.t >= start / cfg.fm) & (x.t < stop / cfg.fm), loud, quiet)
    return x.with_samples(env * x.samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fs", type=float, default=90e6)
    ap.add_argument("--loud", type=float, default=1.5)
    ap.add_argument("--quiet", type=float, default=0.2)
    args = ap.parse_args()

    base = DmConfig(fm=10e6, fs=args.fs, gm3=72e-6, C1=1e-12)
    cfg = CvsdConfig(base, 72e-6, 162e-6)
    x = burst(base, args.loud, args.quiet, 15, 40, 60)
    k0 = ACQUISITION_SYMBOLS * base.samples_per_symbol
    cv = cvsd_encode(cfg, x)
    dm = dm_encode_circuit(base, x)
    s = measure_steps(cv.staircase, base.fs)
    print(f"ctrl_gain = {cfg.ctrl_gain:.4g} (A/V)/V, step range {cfg.step_min:.3f}..{cfg.step_max:.3f} V")
    print(f"measured steps: min {s.min_step:.4f}  max {s.max_step:.4f}  ratio {s.max_step / s.min_step:.3f}")
    for name, st in (("cvsd", cv.staircase), ("dm at min step", dm.staircase)):
        e = (x.samples - st.samples)[k0:]
        print(f"rms error {name:>15}: {np.sqrt(np.mean(e * e)):.4f} V")


if __name__ == "__main__":
    main()
