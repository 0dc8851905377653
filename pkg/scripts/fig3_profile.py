"""Elasticity profile for sigma = sqrt(u), u- = 4, u+ = 5 and its phase portrait data.

Writes profile.csv (theta, tau, u, w, E, u, v) and extrema.csv (kind, tau, u, E)
and prints the landmarks of the orbit.
"""

import argparse
import json
from pathlib import Path

from dispshock.cli import write_csv
from dispshock.heteroclinic import saddle_analysis, shoot_heteroclinic
from dispshock.integrate import energy_audit
from dispshock.models import Elasticity, StressLaw, problem_for_friction, shock_speed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=0.004)
    ap.add_argument("--out", default="out/fig3_profile")
    args = ap.parse_args()

    law = StressLaw("sqrt")
    shock = shock_speed(law, 4.0, 5.0, 2)
    problem = problem_for_friction(Elasticity(law), shock, args.c)
    prof = shoot_heteroclinic(problem)
    tr = prof.trajectory
    out = Path(args.out)
    comment = f"fig3 profile c={args.c!r}"
    write_csv(out / "profile.csv", comment, ("theta", "tau", "u", "w", "E", "u_phys", "v"),
              zip(prof.theta, prof.tau, prof.u, prof.w, prof.E, prof.fields["u"], prof.fields["v"]))
    write_csv(out / "extrema.csv", comment, ("kind", "tau", "u", "E"),
              ((e.kind, e.tau, e.u, e.E) for e in tr.events))
    sd = saddle_analysis(problem)
    print(json.dumps({
        "s": shock.s, "u_s": problem.u_s, "E_max": problem.E_max, "c_star": problem.c_star,
        "lambda_plus": sd.lambda_plus, "spiral": sd.spiral, "first_max": tr.events[0].u,
        "n_extrema": len(tr.events), "terminal_offset": float(tr.v[-1]),
        "energy_audit": energy_audit(problem, tr),
    }, indent=2))


if __name__ == "__main__":
    main()
