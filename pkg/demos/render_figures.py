#!/usr/bin/env python3
"""Render one trajectory figure per regime kind (k = 3) as SVG files.

Six figures: the cycle at tau_3, the short cycles on the open intervals, the
two divergent critical cases, and the long symmetric cycle.  Divergent tails
end in an arrow.  Output is deterministic, so re-running reproduces the same
bytes.
"""

import os
from fractions import Fraction as F

import delayswitch as ds

OUT_DIR = "figures"
K = 3


def main() -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    tau_k = ds.critical_value(ds.CriticalKind.TAU, K)
    theta_k = ds.critical_value(ds.CriticalKind.THETA, K)
    zeta_k = ds.critical_value(ds.CriticalKind.ZETA, K)
    tau_next = ds.critical_value(ds.CriticalKind.TAU, K + 1)
    figures = [
        ("fig1_at_tau", tau_k),
        ("fig2_tau_theta", (tau_k + theta_k) / 2),
        ("fig3_at_theta", theta_k),
        ("fig4_theta_zeta", (theta_k + zeta_k) / 2),
        ("fig5_at_zeta", zeta_k),
        ("fig6_zeta_tau_next", (zeta_k + tau_next) / 2),
    ]
    for name, tau in figures:
        outcome = ds.run(tau)
        label = ds.behavior_label(outcome)
        n = len(outcome.trace.turning_points)
        svg = ds.render_trajectory(
            outcome,
            label_indices=(2 * K, 2 * K + 1),
            title=f"tau = {ds.rat_format(tau)} ({label})",
        )
        path = os.path.join(OUT_DIR, f"{name}.svg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"{path}: tau = {ds.rat_format(tau)}, {label}, {n} switchings traced")


if __name__ == "__main__":
    main()
