"""Cross-validation harness.

Three independent routes to the same answers are compared here: the exact
event simulation (engine), the closed-form predictions (analysis), and a
deliberately low-tech fixed-step floating-point simulation.  ``sweep`` runs
the classifier-vs-simulator comparison over every regime up to a chosen k
and serializes the result as CSV or JSON; disagreements are report rows,
never aborts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import analysis, engine
from .analysis import Behavior, CriticalKind, Prediction, RegimeKind
from .exact import Rat, rat_format


class OracleRefusal(ValueError):
    """The float oracle cannot resolve the requested delay."""


@dataclass(frozen=True)
class TheoremCheck:
    """Agreement record between the classifier and one exact simulation."""

    tau: Rat
    prediction: Prediction
    simulated_behavior: str
    simulated_switches: int | None
    agree: bool
    reason: str  # "" when agreeing; else "horizon" | "behavior" | "switch_count" | "certificate"
    certificate_ok: bool | None  # None when not applicable / not requested


@dataclass(frozen=True)
class ClosedFormCheck:
    """Agreement record between closed forms and one exact simulation."""

    tau: Rat
    horizon: int
    simulated_horizon: int | None
    agree: bool
    mismatches: tuple[str, ...]


def _simulated_behavior(outcome: engine.Outcome) -> tuple[str, int | None]:
    label = engine.behavior_label(outcome)
    if isinstance(outcome, engine.Periodic):
        return label, outcome.switchings_per_period
    if isinstance(outcome, engine.Divergent):
        return label, outcome.total_switchings
    return label, None


def periodicity_certificate(
    tau: Rat,
    outcome: engine.Periodic,
    ic: engine.InitialCondition | None = None,
) -> bool:
    """Replay one extra period and confirm the switch sequence repeats.

    Switch n + m must occur exactly least_period after switch n with the same
    position, for every n in the reported cycle (m switchings per period).
    """
    i, m = outcome.start_switch, outcome.switchings_per_period
    period = outcome.least_period
    trace = engine.simulate_switches(tau, i + 2 * m - 1, ic)
    points = trace.turning_points
    if len(points) < i + 2 * m - 1:
        return False
    for n in range(i, i + m):
        a, b = points[n - 1], points[n + m - 1]
        if b.beta - a.beta != period or b.alpha != a.alpha:
            return False
    return True


def check_theorem(
    tau: Rat,
    max_switches: int = engine.DEFAULT_MAX_SWITCHES,
    max_time: Rat = engine.DEFAULT_MAX_TIME,
    certify: bool = True,
) -> TheoremCheck:
    """Compare the classifier's prediction with an exact simulation of tau.

    Behavior kind and switch count must match exactly; for periodic outcomes
    the period certificate is confirmed as well (unless certify=False).
    An Undetermined simulation is a disagreement with reason "horizon".
    """
    prediction = analysis.classify(tau)
    if prediction.regime.kind is RegimeKind.OUT_OF_RANGE:
        raise ValueError("check_theorem requires tau in [4/3, 3/2)")
    outcome = engine.run(tau, max_switches=max_switches, max_time=max_time)
    behavior, switches = _simulated_behavior(outcome)
    certificate_ok: bool | None = None
    if isinstance(outcome, engine.Undetermined):
        agree, reason = False, "horizon"
    elif behavior != prediction.behavior.value:
        agree, reason = False, "behavior"
    elif switches != prediction.switch_count:
        agree, reason = False, "switch_count"
    else:
        agree, reason = True, ""
        if certify and isinstance(outcome, engine.Periodic):
            certificate_ok = periodicity_certificate(tau, outcome)
            if not certificate_ok:
                agree, reason = False, "certificate"
    return TheoremCheck(tau, prediction, behavior, switches, agree, reason, certificate_ok)


def check_closed_form(
    tau: Rat,
    max_switches: int = engine.DEFAULT_MAX_SWITCHES,
    max_time: Rat = engine.DEFAULT_MAX_TIME,
    j_cap: int = 200,
) -> ClosedFormCheck:
    """Confirm simulated switch data equals the closed forms up to the horizon.

    For every j <= J the simulated beta_j and alpha_j must equal beta_closed
    and alpha_closed exactly, and the first index at which the simulated
    turning values violate the alternating inequalities must be J itself.
    """
    horizon = analysis.horizon_J(tau, j_cap)
    if horizon is math.inf:
        raise ValueError(f"horizon_J exceeded j_cap={j_cap}")
    outcome = engine.run(tau, max_switches=max_switches, max_time=max_time)
    points = outcome.trace.turning_points
    mismatches: list[str] = []
    if len(points) < horizon:
        mismatches.append(f"trace has {len(points)} switchings, horizon is {horizon}")
    for j in range(1, min(horizon, len(points)) + 1):
        point = points[j - 1]
        if point.beta != analysis.beta_closed(j, tau):
            mismatches.append(f"beta_{j}")
        if point.alpha != analysis.alpha_closed(j, tau):
            mismatches.append(f"alpha_{j}")
    simulated_horizon: int | None = None
    for j, point in enumerate(points, start=1):
        holds = point.alpha > 1 if j % 2 else point.alpha < 1
        if not holds:
            simulated_horizon = j
            break
    if simulated_horizon != horizon:
        mismatches.append(f"simulated horizon {simulated_horizon} != {horizon}")
    return ClosedFormCheck(tau, horizon, simulated_horizon, not mismatches, tuple(mismatches))


def float_oracle(tau: Rat, dt: float = 1e-6, t_end: float = 20.0) -> list[tuple[float, float]]:
    """Fixed-step binary-64 simulation with per-step delayed-value lookup.

    Returns approximate turning points (t, x) for coarse comparison against
    the exact engine (documented tolerance 10*dt).  Each step looks the
    delayed position up in the recorded history (linearly interpolated, the
    delay being a non-integer number of steps); when the delayed sample
    crosses 0 or 1 the slope is toggled at the interpolated crossing instant
    inside that step, which keeps discretization error far inside tolerance.

    Refuses delays within 1000*dt of a critical value: floating point cannot
    resolve behavior that changes on exact rational equality.
    """
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not 0 < dt <= 1e-6:
        raise ValueError("dt must be in (0, 1e-6]")
    gap = analysis.distance_to_critical(tau)
    if gap < 1000 * Fraction(dt):
        raise OracleRefusal(
            f"tau = {rat_format(tau)} is within 1000*dt of a critical delay; "
            "the float oracle cannot resolve criticality"
        )

    tau_f = float(tau)
    n_steps = int(round(t_end / dt))
    delay = tau_f / dt
    d_int = int(delay)
    d_frac = delay - d_int
    off = d_int + 1  # history samples live at step indices -off..0
    x = np.empty(off + n_steps + 1, dtype=np.float64)
    x[: off + 1] = np.arange(-off, 1, dtype=np.float64) * dt  # canonical history x = t
    slope = 1.0
    turning: list[tuple[float, float]] = []
    filled = 0
    while filled < n_steps:
        # Chunks never exceed the delay in steps, so every delayed sample
        # needed below was computed in an earlier chunk.
        length = min(d_int, n_steps - filled)
        lo = filled + 1
        base = off + lo - 1 - d_int
        seg = x[base - 1 : base + length + 1]
        delayed = (1.0 - d_frac) * seg[1:] + d_frac * seg[:-1]
        crossings: list[tuple[int, float]] = []
        for bound in (0.0, 1.0):
            left = delayed[:-1] - bound
            right = delayed[1:] - bound
            for idx in np.nonzero((left * right < 0.0) | ((right == 0.0) & (left != 0.0)))[0]:
                i = int(idx)
                frac = 1.0 if right[i] == 0.0 else float(left[i] / (left[i] - right[i]))
                crossings.append((lo + i, frac))
        crossings.sort()
        slopes = np.full(length, slope)
        for n, _ in crossings:
            slopes[n - lo + 1 :] *= -1.0
        incr = slopes * dt
        by_step: dict[int, list[float]] = {}
        for n, frac in crossings:
            by_step.setdefault(n, []).append(frac)
        for n, fracs in by_step.items():
            s = slopes[n - lo]
            travelled, prev = 0.0, 0.0
            for frac in fracs:
                travelled += s * (frac - prev)
                s, prev = -s, frac
            incr[n - lo] = (travelled + s * (1.0 - prev)) * dt
        x[off + lo : off + lo + length] = x[off + filled] + np.cumsum(incr)
        for n in sorted(by_step):
            s = float(slopes[n - lo])
            x_cur = float(x[off + n - 1])
            prev = 0.0
            for frac in by_step[n]:
                x_cur += s * (frac - prev) * dt
                turning.append(((n - 1 + frac) * dt, x_cur))
                s, prev = -s, frac
        slope *= (-1.0) ** len(crossings)
        filled += length
    return turning


@dataclass(frozen=True)
class SweepEntry:
    tau: Rat
    prediction: Prediction
    simulated_behavior: str
    simulated_switches: int | None
    agree: bool


@dataclass(frozen=True)
class SweepReport:
    k_max: int
    samples_per_interval: int
    entries: tuple[SweepEntry, ...]

    @property
    def agreements(self) -> int:
        return sum(1 for e in self.entries if e.agree)

    @property
    def disagreements(self) -> int:
        return len(self.entries) - self.agreements

    @property
    def all_agree(self) -> bool:
        return self.disagreements == 0

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [
                "tau",
                "regime",
                "predicted_behavior",
                "predicted_switches",
                "simulated_behavior",
                "simulated_switches",
                "agree",
            ]
        )
        for e in self.entries:
            writer.writerow(
                [
                    rat_format(e.tau),
                    e.prediction.regime.kind.value,
                    e.prediction.behavior.value,
                    e.prediction.switch_count,
                    e.simulated_behavior,
                    "" if e.simulated_switches is None else e.simulated_switches,
                    "true" if e.agree else "false",
                ]
            )
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "k_max": self.k_max,
            "samples_per_interval": self.samples_per_interval,
            "total": len(self.entries),
            "agreements": self.agreements,
            "all_agree": self.all_agree,
            "entries": [
                {
                    "tau": rat_format(e.tau),
                    "regime": e.prediction.regime.kind.value,
                    "k": e.prediction.regime.k,
                    "predicted_behavior": e.prediction.behavior.value,
                    "predicted_switches": e.prediction.switch_count,
                    "simulated_behavior": e.simulated_behavior,
                    "simulated_switches": e.simulated_switches,
                    "agree": e.agree,
                }
                for e in self.entries
            ],
        }
        return json.dumps(doc, indent=2) + "\n"


def sweep_taus(k_max: int, samples_per_interval: int) -> list[Rat]:
    """Deterministic tau list: each critical value plus exact rationals at
    fixed fractions i/(m+1) of every open interval between them."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if samples_per_interval < 0:
        raise ValueError("samples_per_interval must be >= 0")
    taus: list[Rat] = []
    m = samples_per_interval
    for k in range(1, k_max + 1):
        anchors = [
            analysis.critical_value(CriticalKind.TAU, k),
            analysis.critical_value(CriticalKind.THETA, k),
            analysis.critical_value(CriticalKind.ZETA, k),
            analysis.critical_value(CriticalKind.TAU, k + 1),
        ]
        for lo, hi in zip(anchors, anchors[1:]):
            taus.append(lo)
            taus.extend(lo + (hi - lo) * Fraction(i, m + 1) for i in range(1, m + 1))
    return taus


def sweep(
    k_max: int,
    samples_per_interval: int = 3,
    max_switches: int = engine.DEFAULT_MAX_SWITCHES,
    max_time: Rat = engine.DEFAULT_MAX_TIME,
) -> SweepReport:
    """Classifier-vs-simulation agreement across all six regimes up to k_max.

    Agreement requires behavior kind and switch count to match exactly.
    Entries are reported in increasing tau order; disagreements are rows,
    not errors, so a sweep always completes.
    """
    entries = []
    for tau in sweep_taus(k_max, samples_per_interval):
        record = check_theorem(tau, max_switches, max_time, certify=False)
        entries.append(
            SweepEntry(
                tau=tau,
                prediction=record.prediction,
                simulated_behavior=record.simulated_behavior,
                simulated_switches=record.simulated_switches,
                agree=record.agree,
            )
        )
    return SweepReport(k_max, samples_per_interval, tuple(entries))
