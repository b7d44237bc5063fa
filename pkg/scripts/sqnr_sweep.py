"""SQNR of 256-level uniform and mu-law companded quantization against input level."""

import argparse

import numpy as np

from otacomm.metrics import companded_quantize, sqnr_db, uniform_quantize
from otacomm.signals import Waveform


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=256)
    ap.add_argument("--mu", type=float, default=255.0)
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()

    n = np.arange(20000)
    print("amplitude  uniform_dB  companded_dB")
    for a in np.logspace(-2, 0, args.points):
        x = Waveform(1.0, a * np.sin(2 * np.pi * 0.0123456789 * n))
        u = sqnr_db(x, x.with_samples(uniform_quantize(x.samples, args.levels, 1.0)))
        c = sqnr_db(x, x.with_samples(companded_quantize(x.samples, args.mu, args.levels)))
        print(f"{a:9.4f}  {u:10.2f}  {c:12.2f}")


if __name__ == "__main__":
    main()
