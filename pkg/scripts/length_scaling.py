"""Oscillation length against friction and the per-cycle energy drop ratio.

Part 1 fits log(L_high + L_low) against log c. Part 2 prints dE(2c)/dE(c)
for the first five cycles along a ladder of c, showing the approach to the
linear-in-c drop as c decreases.
"""

import argparse
from pathlib import Path

from dispshock.analysis import fit_length_scaling, oscillation_report
from dispshock.cli import write_csv
from dispshock.heteroclinic import shoot_heteroclinic
from dispshock.models import Elasticity, StressLaw, problem_for_friction, shock_speed


def first_drops(problem, n=5):
    prof = shoot_heteroclinic(problem, tau_budget=1500.0, require_convergence=False)
    return [r.dE for r in oscillation_report(problem, prof).cycles[:n]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, nargs="+", default=[0.002, 0.004, 0.008, 0.016])
    ap.add_argument("--ladder", type=float, nargs="+", default=[2.5e-4, 5e-4, 1e-3, 2e-3, 4e-3])
    ap.add_argument("--out", default="out/length_scaling")
    args = ap.parse_args()

    law = StressLaw("sqrt")
    base = problem_for_friction(Elasticity(law), shock_speed(law, 4.0, 5.0, 2), 0.004)
    reports = []
    for c in args.c:
        pc = base.with_friction(c)
        reports.append(oscillation_report(pc, shoot_heteroclinic(pc)))
    slope, intercept, r2 = fit_length_scaling(reports)
    write_csv(Path(args.out) / "lengths.csv", "length scaling, sigma = sqrt(u), 4 -> 5",
              ("c", "L_high", "L_low", "decay_rate", "tail_spacing"),
              ((r.c, r.L_high, r.L_low, r.decay_rate, r.tail_spacing) for r in reports))
    print(f"slope {slope:.4f}  intercept {intercept:.4f}  r2 {r2:.6f}")

    print("\nper-cycle drop ratio dE(2c)/dE(c), cycles 0..4")
    drops = {c: first_drops(base.with_friction(c)) for c in args.ladder}
    for a, b in zip(args.ladder, args.ladder[1:]):
        if abs(b / a - 2.0) > 1e-12:
            continue
        ratios = [y / x for x, y in zip(drops[a], drops[b])]
        print(f"c = {a:<8g}" + "  ".join(f"{r:.3f}" for r in ratios)
              + f"   (first drop {abs(drops[a][0]) / base.E_max:.1%} of E_max)")


if __name__ == "__main__":
    main()
