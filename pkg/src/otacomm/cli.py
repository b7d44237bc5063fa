"""Command-line experiment runner.

    otacomm <experiment> [--preset NAME] [--config FILE] [--set k=v ...]
            [--out DIR] [--seed N] [--gnuplot-stub]
    otacomm presets

Exit codes: 0 ok, 2 config parse, 3 validation, 4 simulation, 5 I/O.
"""

from __future__ import annotations

import argparse
import os
import sys

from .experiments import (
    EXPERIMENTS,
    PRESETS,
    ConfigError,
    ValidationError,
    list_presets,
    load_config_file,
    resolve_params,
    run_experiment,
)

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_SIMULATION, EXIT_IO = 0, 2, 3, 4, 5


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="otacomm", description=__doc__.split("\n\n")[0])
    ap.add_argument("experiment", choices=(*EXPERIMENTS, "presets"))
    ap.add_argument("--preset")
    ap.add_argument("--config", help="key = value file, or a manifest.json from an earlier run")
    ap.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    ap.add_argument("--out", help="output directory (default $OTACOMM_OUT or ./otacomm_out)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--gnuplot-stub", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.experiment == "presets":
        print(list_presets())
        return EXIT_OK

    raw: dict[str, str] = {}
    seed = None
    try:
        if args.preset:
            if args.preset not in PRESETS:
                raise ConfigError(f"unknown preset {args.preset!r}; see 'otacomm presets'")
            preset = PRESETS[args.preset]
            if preset.experiment != args.experiment:
                raise ConfigError(f"preset {args.preset!r} is a {preset.experiment!r} experiment")
            raw.update(preset.params)
        if args.config:
            exp, file_params, seed = load_config_file(args.config)
            if exp is not None and exp != args.experiment:
                raise ConfigError(f"manifest is for experiment {exp!r}, not {args.experiment!r}")
            raw.update(file_params)
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(f"--set expects key=value, got {item!r}")
            k, v = (s.strip() for s in item.split("=", 1))
            raw[k] = v
        params = resolve_params(args.experiment, raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.seed is not None:
        seed = args.seed
    out = args.out or os.environ.get("OTACOMM_OUT") or "otacomm_out"
    try:
        result = run_experiment(args.experiment, params, out, seed=seed or 0,
                                gnuplot=args.gnuplot_stub, preset=args.preset)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        print(f"simulation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    for k, v in result.summary.items():
        print(f"{k} = {v}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
