"""Worst-case DM tracking error (in steps) over tone phase, against k and amplitude.

Amplitude is given as a multiple of the overload amplitude delta*fs/(2*pi*fm).
"""

import argparse
import math

import numpy as np

from otacomm.delta_mod import ACQUISITION_SYMBOLS, DmConfig, dm_encode_circuit
from otacomm.signals import sine


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--factors", default="0.5,1,2")
    ap.add_argument("--kmax", type=int, default=16)
    args = ap.parse_args()
    factors = [float(f) for f in args.factors.split(",")]
    phases = np.linspace(0, 2 * np.pi, 25)[:-1]

    print(" k  " + "  ".join(f"{f:>13}x" for f in factors))
    for k in range(2, args.kmax + 1):
        cfg = DmConfig.from_oversampling(10e6, k, 100e-6, 1.25e-12)
        a_ov = cfg.delta * cfg.fs / (2 * math.pi * cfg.fm)
        k0 = ACQUISITION_SYMBOLS * cfg.samples_per_symbol
        cells = []
        for f in factors:
            errs = []
            for ph in phases:
                x = sine(f * a_ov, cfg.fm, ph, dt=cfg.dt, duration=3 / cfg.fm)
                e = np.abs(x.samples - dm_encode_circuit(cfg, x).staircase.samples)[k0:]
                errs.append(e.max() / cfg.delta)
            cells.append(f"{min(errs):6.2f}-{max(errs):6.2f}")
        print(f"{k:2d}  " + "  ".join(f"{c:>14}" for c in cells))


if __name__ == "__main__":
    main()
