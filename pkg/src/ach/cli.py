"""Command line interface.

Subcommands:
  campaign   run a batch experiment grid, write results.csv + manifests
  oracle     exact minimum cost of one mapping instance (JSON to stdout)
  fit        fit a standard model to a results.csv
  collapse   scaling-collapse table and quality metric from a results.csv

Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .harness import (CampaignConfig, ConfigError, FIT_MODELS, fit_rows,
                      read_results, run_campaign, scaling_collapse,
                      write_results)
from .oracle import exhaustive_min_cost
from .perceptron import generate_random_mapping, generate_teacher_mapping

_TOPOLOGIES = {"lattice": "lattice", "rrg": "random-regular",
               "random-regular": "random-regular"}


def _int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ach", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("campaign", help="run a simulation campaign")
    c.add_argument("--config", help="JSON file with CampaignConfig fields; "
                                    "other flags override it")
    c.add_argument("--f-list", type=_int_list)
    c.add_argument("--topology", choices=sorted(_TOPOLOGIES))
    c.add_argument("--l-list", type=_int_list, help="lattice sizes L")
    c.add_argument("--c-list", type=_int_list, help="connectivities C")
    c.add_argument("--n", type=int, help="node count for random-regular")
    c.add_argument("--mapping", choices=["teacher", "random"])
    c.add_argument("--runs", type=int, help="runs per mapping realization")
    c.add_argument("--realizations", type=int,
                   help="exact number of mapping realizations per grid point "
                        "(sets both the minimum and maximum)")
    c.add_argument("--seed", type=int, help="master seed")
    c.add_argument("--out-dir")
    c.add_argument("--max-events", type=float)
    c.add_argument("--threads", type=int)
    c.add_argument("--quiet", action="store_true",
                   help="suppress per-gridpoint progress on stderr")

    o = sub.add_parser("oracle", help="exhaustive minimum cost of one mapping")
    o.add_argument("--f", type=int, required=True)
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--mapping", choices=["random", "teacher"], default="random")
    o.add_argument("--f-limit", type=int, default=25)

    f = sub.add_parser("fit", help="fit a standard model to results.csv")
    f.add_argument("--input", required=True)
    f.add_argument("--model", required=True, choices=FIT_MODELS)

    k = sub.add_parser("collapse", help="scaling collapse of results.csv")
    k.add_argument("--input", required=True)
    k.add_argument("--n-min", type=int, default=900,
                   help="smallest N included in the quality metric")
    return ap


def _campaign_config(args) -> CampaignConfig:
    fields = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                fields = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}")
        known = {f.name for f in dataclasses.fields(CampaignConfig)}
        bad = set(fields) - known
        if bad:
            raise ConfigError(f"unknown config keys: {sorted(bad)}")
    if args.f_list is not None:
        fields["f_list"] = args.f_list
    if args.topology is not None:
        fields["topology"] = _TOPOLOGIES[args.topology]
    if args.l_list is not None:
        fields["l_list"] = args.l_list
    if args.c_list is not None:
        fields["c_list"] = args.c_list
    if args.n is not None:
        fields["n"] = args.n
    if args.mapping is not None:
        fields["mapping_kind"] = args.mapping
    if args.runs is not None:
        fields["runs_per_mapping"] = args.runs
    if args.realizations is not None:
        fields["realizations_min"] = args.realizations
        fields["realizations_max"] = args.realizations
    if args.seed is not None:
        fields["master_seed"] = args.seed
    if args.out_dir is not None:
        fields["out_dir"] = args.out_dir
    if args.max_events is not None:
        fields["max_events"] = int(args.max_events)
    if args.threads is not None:
        fields["threads"] = args.threads
    if "f_list" not in fields:
        raise ConfigError("f_list is required (via --f-list or --config)")
    if "topology" in fields:
        fields["topology"] = _TOPOLOGIES.get(fields["topology"],
                                             fields["topology"])
    try:
        return CampaignConfig(**fields)
    except TypeError as exc:
        raise ConfigError(str(exc))


def _cmd_campaign(args) -> int:
    cfg = _campaign_config(args)
    cfg.validate()
    result = run_campaign(cfg, log=None if args.quiet else sys.stderr)
    if cfg.out_dir:
        paths = write_results(result, [], cfg.out_dir)
        print(json.dumps({"rows": len(result.rows), **paths}))
    else:
        from .harness import rows_to_csv
        sys.stdout.write(rows_to_csv(result.rows))
    return 0


def _cmd_oracle(args) -> int:
    if args.f < 1 or args.f % 2 == 0:
        raise ConfigError(f"F must be positive odd, got {args.f}")
    if args.m < 0:
        raise ConfigError(f"M must be non-negative, got {args.m}")
    rng = np.random.default_rng(np.random.SeedSequence([args.seed]))
    if args.mapping == "teacher":
        mapping, _ = generate_teacher_mapping(args.f, args.m, rng)
    else:
        mapping = generate_random_mapping(args.f, args.m, rng)
    res = exhaustive_min_cost(mapping, f_limit=args.f_limit)
    print(json.dumps({
        "F": args.f, "M": args.m, "kind": mapping.kind, "seed": args.seed,
        "min_cost": res.min_cost,
        "minimizer_count": res.minimizer_count,
        "one_minimizer": res.one_minimizer.tolist(),
    }))
    return 0


def _cmd_fit(args) -> int:
    rows = read_results(args.input)
    fit = fit_rows(rows, args.model)
    print(json.dumps(dataclasses.asdict(fit)))
    return 0


def _cmd_collapse(args) -> int:
    rows = read_results(args.input)
    table, quality = scaling_collapse(rows, n_min=args.n_min)
    print(json.dumps({
        "quality": quality,
        "n_min": args.n_min,
        "table": [{"u": u, "pm": pm, "N": n, "F": f}
                  for u, pm, n, f in table],
    }))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"campaign": _cmd_campaign, "oracle": _cmd_oracle,
               "fit": _cmd_fit, "collapse": _cmd_collapse}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"ach: config error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("ach: interrupted", file=sys.stderr)
        return 3
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"ach: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
