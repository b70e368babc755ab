#!/usr/bin/env python3
"""Atlas of regimes on [4/3, 3/2): critical delays and a full agreement sweep.

Three interleaved rational sequences tau_k < theta_k < zeta_k < tau_{k+1}
converge to 3/2 and separate six behaviors per k.  The sweep simulates every
critical delay for k <= 6 plus three interior samples of each open interval
and checks the exact switch counts against the classifier's prediction.
"""

from fractions import Fraction as F

import delayswitch as ds


def main() -> None:
    print("critical delays (exact | decimal):")
    for k in range(1, 7):
        row = []
        for kind in (ds.CriticalKind.TAU, ds.CriticalKind.THETA, ds.CriticalKind.ZETA):
            value = ds.critical_value(kind, k)
            row.append(f"{kind.value}_{k} = {ds.rat_format(value)} ({ds.rat_to_decimal(value, 8)})")
        print("  " + "   ".join(row))
    print()

    report = ds.sweep(k_max=6, samples_per_interval=3)
    print(f"sweep: {len(report.entries)} delays, {report.agreements} agree, "
          f"{report.disagreements} disagree")
    print()
    print("per-regime switch counts observed (k -> counts):")
    by_regime: dict[str, list[tuple[int, int]]] = {}
    for entry in report.entries:
        key = entry.prediction.regime.kind.value
        by_regime.setdefault(key, []).append(
            (entry.prediction.regime.k, entry.simulated_switches)
        )
    for regime, pairs in by_regime.items():
        summary = ", ".join(f"k={k}:{n}" for k, n in sorted(set(pairs)))
        print(f"  {regime:>20}: {summary}")

    out = "regime_atlas.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(report.to_csv())
    print(f"\nfull table written to {out}")


if __name__ == "__main__":
    main()
