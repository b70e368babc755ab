#!/usr/bin/env python3
"""Three routes to the switch data, compared exactly.

While the turning values stay above 1 at odd switches and below 1 at even
ones (up to the horizon J), the switch times satisfy a three-term recurrence
with the closed form

    beta_j = (6j + 1 - (-2)^j)/9 * tau - ((-2)^(j-1) - 1)/3
    alpha_j = (2^j - (-1)^j)/3 * tau - 2^(j-1) + 1.

This script evaluates recurrence, closed form, and exact simulation side by
side and reports the horizon where the closed forms stop being valid.
"""

from fractions import Fraction as F

import delayswitch as ds


def crosscheck(tau: F) -> None:
    J = ds.horizon_J(tau)
    betas = ds.beta_recurrence(J, tau)
    points = ds.run(tau).trace.turning_points
    print(f"tau = {ds.rat_format(tau)}   horizon J = {J}")
    print("   j |     recurrence |    closed form |      simulated | alpha_j")
    for j in range(1, J + 1):
        closed = ds.beta_closed(j, tau)
        simulated = points[j - 1].beta
        alpha = points[j - 1].alpha
        agree = betas[j - 1] == closed == simulated
        print(
            f"  {j:2d} | {ds.rat_format(betas[j - 1]):>14} | {ds.rat_format(closed):>14} "
            f"| {ds.rat_format(simulated):>14} | {ds.rat_format(alpha):>9}"
            + ("" if agree else "   MISMATCH")
        )
    record = ds.check_closed_form(tau)
    print(f"  verdict: {'all equal up to J' if record.agree else record.mismatches}")
    print()


def main() -> None:
    crosscheck(F(89, 66))  # midpoint of (tau_1, theta_1)
    crosscheck(F(147, 100))  # inside (theta_2, zeta_2)
    crosscheck(F(1499, 1000))  # close to the 3/2 accumulation point

    # past the horizon the closed form no longer describes the trajectory
    tau = F(147, 100)
    J = ds.horizon_J(tau)
    points = ds.run(tau).trace.turning_points
    j = J + 1
    print(
        f"beyond the horizon at tau = {ds.rat_format(tau)}: simulated alpha_{j} = "
        f"{ds.rat_format(points[j - 1].alpha)} vs closed form "
        f"{ds.rat_format(ds.alpha_closed(j, tau))} (expected to differ)"
    )


if __name__ == "__main__":
    main()
