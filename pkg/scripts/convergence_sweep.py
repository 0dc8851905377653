"""delta = epsilon^p convergence sweeps for the three model families.

For each model and exponent prints the L1 distance ratios per epsilon
halving, the support-width slope against delta/epsilon and the range of
c/c*. A second block repeats the width fit over a full decade of
delta/epsilon at small epsilon.
"""

import argparse
from pathlib import Path

from dispshock.cli import write_csv
from dispshock.convergence import sweep, width_slope
from dispshock.models import QHD, Boussinesq, Elasticity, StressLaw, boussinesq_shock, qhd_mass_flux, shock_speed
from dispshock.models import problem_for_friction


def cases():
    law = StressLaw("sqrt")
    return {
        "boussinesq": (Boussinesq(2.0), boussinesq_shock(2.0)),
        "elasticity": (Elasticity(law), shock_speed(law, 4.0, 5.0, 2)),
        "qhd": (QHD(1.4), qhd_mass_flux(1.4, 1.5, 1.0, 2)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[4e-2, 2e-2, 1e-2, 5e-3])
    ap.add_argument("--p", type=float, nargs="+", default=[1.25, 1.5, 1.75, 2.0])
    ap.add_argument("--small-eps", type=float, nargs="+", default=[1e-3, 3e-4, 1e-4, 3e-5, 1e-5])
    ap.add_argument("--out", default="out/convergence")
    args = ap.parse_args()

    out = Path(args.out)
    for name, (model, shock) in cases().items():
        c_star = problem_for_friction(model, shock, 1e-3).c_star
        for p in args.p:
            recs = sweep(model, shock, args.eps, p)
            write_csv(out / f"sweep_{name}_p{p:g}.csv", f"{name} p={p!r}",
                      ("epsilon", "delta", "c", "l1_distance", "support_width"),
                      ((r.epsilon, r.delta, r.c, r.l1_distance, r.support_width) for r in recs))
            L = [r.l1_distance for r in recs]
            ratios = " ".join(f"{b / a:.3f}" for a, b in zip(L, L[1:]))
            cc = [r.c / c_star for r in recs]
            print(f"{name:11s} p={p:<5g} L1 ratios {ratios}  width slope {width_slope(recs):.3f}  "
                  f"c/c* {min(cc):.3f}..{max(cc):.3f}")
    print("\nwidth slope over one decade of delta/epsilon (p = 1.5)")
    for name, (model, shock) in cases().items():
        recs = sweep(model, shock, args.small_eps, 1.5)
        print(f"{name:11s} {width_slope(recs):.3f}")


if __name__ == "__main__":
    main()
