"""Exact event-driven simulation of the delay-switched unit-slope system.

The position moves with slope +1 or -1.  Whenever the path reaches the
critical set {0, 1} (a "hit", including tangential touches) the active slope
is toggled exactly ``tau`` later (a "switch"; the point (beta_j, alpha_j) is
the j-th turning point).  Between events the path is linear, so with a
rational delay every event time and coordinate is an exact rational and the
evolution is computed without rounding.

The complete Markov state is (slope, position, pending switch offsets):
exact recurrence of that state across two switch instants certifies
periodicity, and an empty pending queue while the path moves away from both
boundaries certifies divergence.  Simulation starts on the rising branch
from x(0) = 0 after a history on [-tau, 0] that stays clear of {0, 1}
before time zero, so the only inherited event is the hit at t = 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Rat

LOW = Fraction(0)
HIGH = Fraction(1)

DEFAULT_MAX_SWITCHES = 10_000
DEFAULT_MAX_TIME = Fraction(10_000)


class InvalidInitialCondition(ValueError):
    """History that touches {0, 1} before t = 0, or is malformed."""


@dataclass(frozen=True)
class InitialCondition:
    """Continuous piecewise-linear history on [-tau, 0], given by breakpoints.

    The first breakpoint sits at t = -tau, the last must be (0, 0), and no
    segment may touch or cross 0 or 1 before time zero.  Only the arrival at
    (0, 0) matters for the future (the invariants forbid earlier hits), but
    the shape is validated so that invalid problem statements are rejected.
    """

    breakpoints: tuple[tuple[Rat, Rat], ...]

    @staticmethod
    def canonical(tau: Rat) -> "InitialCondition":
        """The two-point history {(-tau, -tau), (0, 0)}: slope +1 arrival."""
        return InitialCondition(((-tau, -tau), (LOW, LOW)))

    @staticmethod
    def from_pairs(pairs) -> "InitialCondition":
        return InitialCondition(tuple((Fraction(t), Fraction(x)) for t, x in pairs))

    def validate(self, tau: Rat) -> None:
        pts = self.breakpoints
        if len(pts) < 2:
            raise InvalidInitialCondition("need at least two breakpoints")
        if pts[0][0] != -tau:
            raise InvalidInitialCondition(f"history must start at t = -tau = {-tau}")
        if pts[-1][0] != 0 or pts[-1][1] != 0:
            raise InvalidInitialCondition("history must end at (0, 0)")
        for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
            if t1 <= t0:
                raise InvalidInitialCondition("breakpoint times must be increasing")
            for y in (LOW, HIGH):
                if x0 == y:
                    raise InvalidInitialCondition(f"history touches {y} at t = {t0}")
                if x1 == y and t1 != 0:
                    raise InvalidInitialCondition(f"history touches {y} at t = {t1}")
                if min(x0, x1) < y < max(x0, x1):
                    raise InvalidInitialCondition(f"history crosses {y} before t = 0")


@dataclass(frozen=True)
class TurningPoint:
    """A switch instant beta with its position alpha = x(beta).

    ``hit_time`` is the hit that scheduled the switch; beta - hit_time == tau
    always (stored for audit).
    """

    beta: Rat
    alpha: Rat
    hit_time: Rat


@dataclass(frozen=True)
class Snapshot:
    """Post-switch Markov state: slope, position, pending switch offsets.

    Offsets are pending switch times minus the snapshot time, strictly
    increasing, each in (0, tau].  Two equal snapshots have identical
    futures.
    """

    slope: int
    x: Rat
    offsets: tuple[Rat, ...]


@dataclass(frozen=True)
class TraceEvent:
    t: Rat
    x: Rat
    kind: str  # "hit" | "switch"; coinciding instants produce one of each


@dataclass
class SimState:
    tau: Rat
    t: Rat
    x: Rat
    slope: int  # +1 exactly while the number of executed switches is even
    pending: deque[Rat]  # strictly increasing switch times, all in (t, t + tau]
    switch_count: int = 0
    turning_points: list[TurningPoint] = field(default_factory=list)
    snapshots: list[Snapshot] = field(default_factory=list)
    events: list[TraceEvent] = field(default_factory=list)


@dataclass(frozen=True)
class StepReport:
    t: Rat
    x: Rat
    hit: bool
    switched: bool


@dataclass(frozen=True)
class SimTrace:
    tau: Rat
    events: tuple[TraceEvent, ...]
    turning_points: tuple[TurningPoint, ...]


@dataclass(frozen=True)
class Periodic:
    least_period: Rat
    switchings_per_period: int
    turning_points: tuple[TurningPoint, ...]  # one full period: switches i..j-1
    start_switch: int  # i, 1-based: first switch of the recurring cycle
    trace: SimTrace


@dataclass(frozen=True)
class Divergent:
    direction: int  # -1: x -> -inf, +1: x -> +inf
    total_switchings: int
    trace: SimTrace


@dataclass(frozen=True)
class Undetermined:
    switchings_executed: int
    trace: SimTrace


Outcome = Periodic | Divergent | Undetermined


def initial_hits(ic: InitialCondition, tau: Rat) -> deque[Rat]:
    """Pending switch times implied by the history: exactly [tau].

    The history invariants forbid hits before t = 0 and force the one at
    t = 0 (value 0), which schedules the first switch at tau.
    """
    ic.validate(tau)
    return deque([Fraction(tau)])


def new_state(tau: Rat, ic: InitialCondition | None = None) -> SimState:
    if tau <= 0:
        raise ValueError("tau must be positive")
    tau = Fraction(tau)
    if ic is None:
        ic = InitialCondition.canonical(tau)
    state = SimState(tau=tau, t=LOW, x=LOW, slope=1, pending=initial_hits(ic, tau))
    state.events.append(TraceEvent(LOW, LOW, "hit"))
    return state


def next_boundary_hit(state: SimState) -> Rat | None:
    """Earliest t > t_now at which the current ray meets {0, 1}.

    None when the ray points away for good (slope -1 at or below 0, slope +1
    at or above 1).  Arrivals that merely touch a boundary count as hits: the
    hit condition is evaluated on the continuous path, not on crossings.
    """
    if state.slope > 0:
        if state.x < LOW:
            return state.t + (LOW - state.x)
        if state.x < HIGH:
            return state.t + (HIGH - state.x)
        return None
    if state.x > HIGH:
        return state.t + (state.x - HIGH)
    if state.x > LOW:
        return state.t + (state.x - LOW)
    return None


def step(state: SimState) -> StepReport:
    """Advance to the earliest event (boundary hit, due switch, or both).

    A hit at time b appends the switch time b + tau to the queue.  A switch
    pops the queue head, toggles the slope, and records the turning point and
    the post-toggle snapshot.  When a hit and a switch fall on the same
    instant both are processed there: the hit is evaluated on the continuous
    position (unambiguous) and the toggle governs the slope strictly after
    the instant, so the snapshot already contains the freshly scheduled
    switch.
    """
    hit_t = next_boundary_hit(state)
    switch_t = state.pending[0] if state.pending else None
    if hit_t is None and switch_t is None:
        raise RuntimeError("no future event: check detect_divergence before stepping")
    if switch_t is None or (hit_t is not None and hit_t < switch_t):
        t_next = hit_t
    else:
        t_next = switch_t
    state.x += state.slope * (t_next - state.t)
    state.t = t_next
    did_hit = hit_t == t_next
    did_switch = switch_t == t_next
    if did_hit:
        assert state.x == LOW or state.x == HIGH
        scheduled = t_next + state.tau
        # hits are isolated instants, so the queue stays strictly increasing
        assert not state.pending or state.pending[-1] < scheduled
        state.pending.append(scheduled)
        state.events.append(TraceEvent(t_next, state.x, "hit"))
    if did_switch:
        assert did_hit or (state.x != LOW and state.x != HIGH)
        state.pending.popleft()
        state.slope = -state.slope
        state.switch_count += 1
        state.turning_points.append(
            TurningPoint(beta=t_next, alpha=state.x, hit_time=t_next - state.tau)
        )
        offsets = tuple(s - t_next for s in state.pending)
        state.snapshots.append(Snapshot(state.slope, state.x, offsets))
        state.events.append(TraceEvent(t_next, state.x, "switch"))
    return StepReport(t_next, state.x, did_hit, did_switch)


def detect_divergence(state: SimState) -> int | None:
    """-1 or +1 once no event can ever occur again and the path moves away.

    With an empty queue nothing will toggle the slope, so slope -1 below 0
    runs to -inf and slope +1 above 1 runs to +inf; every other empty-queue
    state still faces a boundary hit.
    """
    if state.pending:
        return None
    if state.slope < 0 and state.x < LOW:
        return -1
    if state.slope > 0 and state.x > HIGH:
        return 1
    return None


def detect_period(snapshots: list[Snapshot]) -> tuple[int, int] | None:
    """Earliest (i, j), i < j, with snapshot_i == snapshot_j (1-based).

    Snapshots are complete states, so a recurrence proves the evolution
    periodic with beta_j - beta_i a period and j - i switchings in it;
    earliest-j-then-earliest-i makes it the least switch-anchored period.
    """
    seen: dict[Snapshot, int] = {}
    for j, snap in enumerate(snapshots, start=1):
        i = seen.get(snap)
        if i is not None:
            return (i, j)
        seen[snap] = j
    return None


def _trace(state: SimState) -> SimTrace:
    return SimTrace(state.tau, tuple(state.events), tuple(state.turning_points))


def run(
    tau: Rat,
    ic: InitialCondition | None = None,
    max_switches: int = DEFAULT_MAX_SWITCHES,
    max_time: Rat = DEFAULT_MAX_TIME,
) -> Outcome:
    """Simulate until the outcome is certain or the limits are reached.

    After every switch the snapshot is checked for exact recurrence
    (Periodic) and the state for divergence; hitting max_switches or
    max_time first yields Undetermined.  All arithmetic is exact.
    """
    if max_switches <= 0 or max_time <= 0:
        raise ValueError("limits must be positive")
    state = new_state(tau, ic)
    first_seen: dict[Snapshot, int] = {}
    while True:
        direction = detect_divergence(state)
        if direction is not None:
            return Divergent(direction, state.switch_count, _trace(state))
        if state.switch_count >= max_switches or state.t >= max_time:
            return Undetermined(state.switch_count, _trace(state))
        report = step(state)
        if report.switched:
            j = state.switch_count
            snap = state.snapshots[-1]
            i = first_seen.get(snap)
            if i is not None:
                points = state.turning_points
                period = points[j - 1].beta - points[i - 1].beta
                return Periodic(
                    least_period=period,
                    switchings_per_period=j - i,
                    turning_points=tuple(points[i - 1 : j - 1]),
                    start_switch=i,
                    trace=_trace(state),
                )
            first_seen[snap] = j


def simulate_switches(
    tau: Rat,
    n_switches: int,
    ic: InitialCondition | None = None,
    max_time: Rat = 10 * DEFAULT_MAX_TIME,
) -> SimTrace:
    """Advance through n_switches switchings with recurrence detection off.

    Used to replay past a detected period (the periodicity certificate).
    Stops early only on divergence or the time cap; callers inspect the
    trace length.
    """
    state = new_state(tau, ic)
    while state.switch_count < n_switches:
        if detect_divergence(state) is not None or state.t >= max_time:
            break
        step(state)
    return _trace(state)


def behavior_label(outcome: Outcome) -> str:
    if isinstance(outcome, Periodic):
        return "periodic"
    if isinstance(outcome, Divergent):
        return "divergent_minus_inf" if outcome.direction < 0 else "divergent_plus_inf"
    return "undetermined"


def trace_records(trace: SimTrace) -> list[dict]:
    """Wire form of the event trace: {"t": "p/q", "x": "p/q", "kind": ...}."""
    from .exact import rat_format

    return [
        {"t": rat_format(e.t), "x": rat_format(e.x), "kind": e.kind}
        for e in trace.events
    ]
