"""``fluordimer --config <file> [--set key=value]... --out <csv>``

Exit status: 0 on success, 1 on a configuration error, 2 on a numerical
failure.  ``--config`` also accepts the name of a shipped preset (fig2a,
fig2b, fig3, fig4, fig5, fig7, fig8, fig9).
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .config import ConfigError, parse_config
from .scan import ScanError, run_scan, write_csv

log = logging.getLogger("fluordimer")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def preset_names():
    return sorted(p.name[:-4] for p in resources.files("fluordimer.presets").iterdir() if p.name.endswith(".cfg"))


def load_config_text(spec: str) -> str:
    path = Path(spec)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    preset = resources.files("fluordimer.presets") / f"{spec}.cfg"
    if preset.is_file():
        return preset.read_text(encoding="utf-8")
    raise ConfigError(f"no config file or preset named {spec!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="fluordimer", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="config file or preset name (default: all defaults)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--out", help="output CSV path (overrides 'out' in the config)")
    p.add_argument("--workers", type=int, help="worker processes (overrides 'workers')")
    p.add_argument("--list-presets", action="store_true", help="print preset names and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.list_presets:
        print("\n".join(preset_names()))
        return EXIT_OK
    try:
        text = load_config_text(args.config) if args.config else ""
        overrides = list(args.set)
        if args.workers is not None:
            overrides.append(f"workers={args.workers}")
        cfg = parse_config(text, overrides)
        out = args.out or cfg.out
        if out is None:
            raise ConfigError("no output path; use --out or the 'out' key")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        log.info("running %s", cfg.mode)
        result = run_scan(cfg)
    except (ScanError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        write_csv(result, out)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    log.info("wrote %d rows to %s", len(result.rows), out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
