"""Relaxation time vs problem size on a fixed lattice.

Measures the mean scaled relaxation time T/N on a 10x10 lattice for a sweep
of input sizes F and fits T/N = c * F^p.  The asymptotic exponent is p = 2;
a 10x10 lattice carries an F-independent overhead that drags the fitted p
below that, so treat the default run (about a minute) as a teaser and rerun
with --l 30 --maps 200 when you have a few hours to burn.

Run:  python3 demos/relaxation_time_scaling.py [--maps 60] [--runs 30]
"""

import argparse
import sys

from ach.harness import CampaignConfig, fit_rows, run_campaign


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--l", type=int, default=10)
    ap.add_argument("--f", type=int, nargs="+", default=[11, 21, 31, 41])
    ap.add_argument("--maps", type=int, default=60, help="mappings per F")
    ap.add_argument("--runs", type=int, default=30, help="runs per mapping")
    ap.add_argument("--seed", type=int, default=12)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    cfg = CampaignConfig(f_list=args.f, l_list=[args.l],
                         runs_per_mapping=args.runs,
                         realizations_min=args.maps,
                         realizations_max=args.maps,
                         master_seed=args.seed)
    result = run_campaign(cfg, log=sys.stdout if args.verbose else None)

    print(f"\n{'F':>4} {'P_m':>8} {'T/N':>10} {'+-':>7}")
    for row in result.rows:
        print(f"{row.f:>4} {row.pm:>8.4f} {row.mean_t_over_n:>10.1f} "
              f"{row.t_stderr:>7.1f}")

    fit = fit_rows(result.rows, "t_over_n_vs_f2")
    print(f"\npower-law fit: T/N = {fit.b:.3f} * F^{fit.a:.2f}  "
          f"(R^2 = {fit.r_squared:.4f}, {fit.points_used} points)")
    print("doubling F quadruples the time bill; the budget per agent grows "
          "as F^2 while the success probability stays put (see "
          "success_probability.py for that half of the story).")


if __name__ == "__main__":
    main()
