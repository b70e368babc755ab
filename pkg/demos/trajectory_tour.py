#!/usr/bin/env python3
"""Tour of the three qualitative behaviors, simulated exactly.

The system: x'(t) = +1 or -1, toggling whenever the position tau time units
ago was 0 or 1.  Depending on the delay the solution either settles into an
exact cycle or, at certain critical delays, escapes to -infinity after a
finite number of switchings.  Everything below is computed in exact rational
arithmetic; the decimals are for reading only.
"""

from fractions import Fraction as F

import delayswitch as ds


def describe(tau: F) -> None:
    prediction = ds.classify(tau)
    outcome = ds.run(tau)
    print(f"tau = {ds.rat_format(tau)} ({ds.rat_to_decimal(tau, 9)})")
    if prediction.regime.k is not None:
        print(
            f"  regime {prediction.regime.kind.value} (k={prediction.regime.k}): "
            f"predicts {prediction.behavior.value}, {prediction.switch_count} switchings"
        )
    else:
        print("  outside [4/3, 3/2): no closed-form prediction, simulation only")
    if isinstance(outcome, ds.Periodic):
        print(
            f"  simulated: periodic, {outcome.switchings_per_period} switchings per "
            f"least period {ds.rat_format(outcome.least_period)}"
        )
        points = outcome.turning_points
    else:
        print(f"  simulated: diverges to -inf after {outcome.total_switchings} switchings")
        points = outcome.trace.turning_points
    for j, p in enumerate(points, start=1):
        print(
            f"    switch {j:2d}: t = {ds.rat_format(p.beta):>9}  "
            f"x = {ds.rat_format(p.alpha):>8}  ({ds.rat_to_decimal(p.alpha, 6)})"
        )
    print()


def main() -> None:
    describe(F(4, 3))  # tau_1: the shortest classified cycle
    describe(F(63, 43))  # theta_2: the divergent critical case
    describe(F(147, 100))  # inside (theta_2, zeta_2): the ten-point cycle
    describe(F(1, 2))  # below the window: still concludes empirically


if __name__ == "__main__":
    main()
