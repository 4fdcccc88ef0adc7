"""Success probability vs F at two population sizes.

P_m is the probability that the frozen population sits at the known minimum
cost.  On small lattices it decays exponentially with the input size F, with
a decay constant that shrinks roughly like N^(-1/2): bigger crowds keep a
usable success rate out to much larger problems.  The blind-guess baseline
2^(-F) is printed alongside; the collective does orders of magnitude better.

Run:  python3 demos/success_probability.py [--maps 80] [--runs 50]
"""

import argparse
import sys

import numpy as np

from ach.harness import CampaignConfig, fit_rows, run_campaign


def sweep(l, f_list, maps, runs, seed, verbose):
    cfg = CampaignConfig(f_list=f_list, l_list=[l], runs_per_mapping=runs,
                         realizations_min=maps, realizations_max=maps,
                         master_seed=seed)
    return run_campaign(cfg, log=sys.stdout if verbose else None).rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", type=int, nargs="+", default=[11, 15, 21, 25, 31])
    ap.add_argument("--maps", type=int, default=80)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=21)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    rows5 = sweep(5, args.f, args.maps, args.runs, args.seed, args.verbose)
    rows10 = sweep(10, args.f, args.maps, args.runs, args.seed + 1, args.verbose)

    print(f"\n{'F':>4} {'P_m(N=25)':>12} {'P_m(N=100)':>12} {'2^-F':>10}")
    for r5, r10 in zip(rows5, rows10):
        print(f"{r5.f:>4} {r5.pm:>8.4f} +-{r5.pm_stderr:.4f} "
              f"{r10.pm:>8.4f} +-{r10.pm_stderr:.4f} {2.0 ** -r5.f:>10.2e}")

    print("\nexponential decay P_m = b exp(-a F):")
    fits = {}
    for n, rows in ((25, rows5), (100, rows10)):
        try:
            fits[n] = fit = fit_rows(rows, "pm_vs_f")
        except ValueError as exc:  # e.g. every point saturated at P_m = 1
            print(f"  N={n}: fit skipped ({exc})")
            continue
        print(f"  N={n:<3}: a = {fit.a:.4f}  (R^2 = {fit.r_squared:.3f})")
    if len(fits) == 2 and fits[100].a > 0:
        print(f"  a(25)/a(100) = {fits[25].a / fits[100].a:.2f}   "
              f"(N^(-1/2) scaling predicts {np.sqrt(100 / 25):.1f})")


if __name__ == "__main__":
    main()
