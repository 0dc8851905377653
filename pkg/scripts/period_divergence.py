"""Hamiltonian period T(E) at c = 0 by quadrature and by direct integration.

Prints T for energies across (0, E_max) and on the approach to the
separatrix, together with the logarithmic increments per decade, which
tend to ln(10)/sqrt(-phi'(u_minus)).
"""

import argparse
import math
from pathlib import Path

import numpy as np

from dispshock.analysis import period, period_ode
from dispshock.cli import write_csv
from dispshock.models import Elasticity, StressLaw, problem_for_friction, shock_speed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/periods")
    # beyond k = 7 the gap E - Phi near the saddle is at rounding level
    ap.add_argument("--kmax", type=int, default=7)
    args = ap.parse_args()

    law = StressLaw("sqrt")
    pr = problem_for_friction(Elasticity(law), shock_speed(law, 4.0, 5.0, 2), 0.004).with_friction(0.0)
    rows = []
    for frac in np.linspace(0.05, 0.95, 10):
        E = frac * pr.E_max
        rows.append((E, period(pr, E), period_ode(pr, E)))
    for k in range(2, args.kmax + 1):
        E = pr.E_max * (1.0 - 10.0**-k)
        rows.append((E, period(pr, E), period_ode(pr, E)))
    write_csv(Path(args.out) / "periods.csv", "periods at c = 0, sigma = sqrt(u), 4 -> 5",
              ("E", "T_quad", "T_ode"), rows)

    worst = max(abs(a - b) / b for _, a, b in rows)
    print(f"E_max = {pr.E_max!r}; max |T_quad - T_ode|/T_ode = {worst:.2e}")
    print(f"harmonic floor 2 pi/sqrt(phi'(u+)) = {2 * math.pi / math.sqrt(float(pr.dphi(pr.u_plus))):.4f}")
    print(f"T(E_m) = {period(pr, pr.E_m):.4f}")
    step = math.log(10.0) / math.sqrt(-float(pr.dphi(pr.u_minus)))
    tail = rows[10:]
    for (E0, T0, _), (E1, T1, _) in zip(tail, tail[1:]):
        print(f"1 - E/E_max = {1 - E1 / pr.E_max:.0e}: T = {T1:.4f}, increment {T1 - T0:.4f} (limit {step:.4f})")


if __name__ == "__main__":
    main()
