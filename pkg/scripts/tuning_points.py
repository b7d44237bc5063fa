"""Effective mu and compressor curves at the three tuning points.

Writes one transfer CSV per point (0 to 2.5 V, 256 points) and prints mu.
"""

import argparse
from pathlib import Path

from otacomm.blocks import DiodeParams, OtaParams
from otacomm.compander import CompressorCircuit, compressor_circuit_dc, compressor_effective_mu
from otacomm.metrics import sweep_transfer

POINTS = [(10e-3, 28.5e-6, 350), (9e-3, 39.5e-6, 230), (8e-3, 39.5e-6, 204)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/tuning_points")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print("gm[A/V]  Is[A]     mu       reference  rel_diff")
    for i, (gm, Is, ref) in enumerate(POINTS, 1):
        c = CompressorCircuit(OtaParams(gm), DiodeParams(Is))
        mu = compressor_effective_mu(c)
        print(f"{gm:<8g} {Is:<9g} {mu:<8.2f} {ref:<10d} {(mu - ref) / ref:+.4f}")
        sweep_transfer(lambda v: compressor_circuit_dc(c, v), 0.0, 2.5, 256).to_csv(
            out / f"point_{i}.csv")


if __name__ == "__main__":
    main()
