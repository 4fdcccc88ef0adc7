#!/usr/bin/env python3
"""Materialize the acceptance-test campaign data.

Runs every campaign declared in tests/acceptance_campaigns.py through the
``ach campaign`` CLI and stores results.csv / manifest.json / diagnostics.json
under tests/acceptance_data/<name>/, plus the exact config.json used.  The
heavy campaigns take hours of single-core time; finished ones are skipped
unless --force is given, so an interrupted generation can simply be rerun.

    python3 scripts/generate_acceptance_data.py             # everything
    python3 scripts/generate_acceptance_data.py --only nscaling_f41
    python3 scripts/generate_acceptance_data.py --list
"""

import argparse
import json
import pathlib
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from acceptance_campaigns import CAMPAIGNS, DATA_DIR  # noqa: E402

from ach.cli import main as ach_main  # noqa: E402


def generate(name: str, force: bool = False) -> bool:
    out_dir = DATA_DIR / name
    if (out_dir / "results.csv").exists() and not force:
        print(f"[skip] {name}: results.csv already present", flush=True)
        return True
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = dict(CAMPAIGNS[name], out_dir=str(out_dir))
    cfg_path = out_dir / "config.json"
    cfg_path.write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")
    print(f"[run ] {name}", flush=True)
    t0 = time.time()
    rc = ach_main(["campaign", "--config", str(cfg_path)])
    print(f"[done] {name}: rc={rc} in {time.time() - t0:.0f}s", flush=True)
    return rc == 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="+", metavar="NAME",
                    help="generate just these campaigns")
    ap.add_argument("--force", action="store_true",
                    help="regenerate even if results.csv exists")
    ap.add_argument("--list", action="store_true",
                    help="list campaign names and exit")
    args = ap.parse_args(argv)
    if args.list:
        for name, cfg in CAMPAIGNS.items():
            pts = len(cfg["f_list"]) * len(cfg.get("l_list")
                                           or cfg.get("c_list"))
            print(f"{name}: {pts} grid points, "
                  f"{cfg['realizations_min']} mappings x "
                  f"{cfg['runs_per_mapping']} runs each, "
                  f"seed {cfg['master_seed']}")
        return 0
    names = args.only or list(CAMPAIGNS)
    unknown = set(names) - set(CAMPAIGNS)
    if unknown:
        print(f"unknown campaign(s): {sorted(unknown)}", file=sys.stderr)
        return 2
    ok = True
    for name in names:
        ok = generate(name, args.force) and ok
    return 0 if ok else 3


if __name__ == "__main__":
    sys.exit(main())
