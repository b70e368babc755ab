import random
from collections import deque
from fractions import Fraction as F

import pytest

from delayswitch.analysis import alpha_closed, beta_closed, horizon_J
from delayswitch.engine import (
    Divergent,
    InitialCondition,
    InvalidInitialCondition,
    Periodic,
    SimState,
    Snapshot,
    Undetermined,
    behavior_label,
    detect_divergence,
    detect_period,
    initial_hits,
    new_state,
    next_boundary_hit,
    run,
    simulate_switches,
    step,
    trace_records,
)


def random_tau_in_window(rng: random.Random) -> F:
    den = rng.randint(50, 5000)
    lo = 4 * den // 3 + 1
    hi = (3 * den - 1) // 2
    return F(rng.randint(lo, hi), den)


# --- initial condition -----------------------------------------------------


def test_initial_hits_canonical():
    for tau in (F(7, 5), F(4, 3)):
        ic = InitialCondition.canonical(tau)
        assert initial_hits(ic, tau) == deque([tau])


def test_initial_hits_interior_breakpoint():
    tau = F(3, 2) - F(1, 100)
    ic = InitialCondition.from_pairs([(-tau, -tau), (F(-1, 2), F(-1, 4)), (0, 0)])
    assert initial_hits(ic, tau) == deque([tau])


def test_initial_condition_rejects_boundary_contact():
    tau = F(7, 5)
    bad = [
        [(-tau, -tau), (F(-1, 2), F(0)), (0, 0)],  # touches 0 before 0
        [(-tau, -tau), (F(-1, 2), F(1)), (0, 0)],  # touches 1
        [(-tau, F(1, 2)), (F(-1, 2), F(-1, 2)), (0, 0)],  # crosses 0 inside a segment
        [(-tau, F(2)), (0, 0)],  # crosses 1
    ]
    for pairs in bad:
        with pytest.raises(InvalidInitialCondition):
            initial_hits(InitialCondition.from_pairs(pairs), tau)


def test_initial_condition_shape_errors():
    tau = F(7, 5)
    with pytest.raises(InvalidInitialCondition):
        InitialCondition.from_pairs([(-1, -1), (0, 0)]).validate(tau)  # wrong start
    with pytest.raises(InvalidInitialCondition):
        InitialCondition.from_pairs([(-tau, -tau), (0, F(1, 2))]).validate(tau)
    with pytest.raises(InvalidInitialCondition):
        InitialCondition.from_pairs([(-tau, -tau), (F(-2), F(-1, 2)), (0, 0)]).validate(tau)


def test_history_shape_is_irrelevant_beyond_hits():
    tau = F(89, 66)
    bent = InitialCondition.from_pairs([(-tau, F(-3)), (F(-1, 3), F(-1, 4)), (0, 0)])
    assert run(tau) == run(tau, ic=bent)


# --- ray geometry ----------------------------------------------------------


def test_next_boundary_hit_cases():
    def state_at(x, slope):
        return SimState(tau=F(7, 5), t=F(10), x=F(x), slope=slope, pending=deque())

    assert next_boundary_hit(state_at(0, 1)) == 11  # rises to 1 in unit time
    assert next_boundary_hit(state_at(F(20, 43), 1)) == F(10) + F(23, 43)
    assert next_boundary_hit(state_at(F(-10, 43), -1)) is None
    assert next_boundary_hit(state_at(F(-1, 2), 1)) == F(21, 2)  # reaches 0 first
    assert next_boundary_hit(state_at(F(3, 2), -1)) == F(21, 2)  # reaches 1 first
    assert next_boundary_hit(state_at(F(1, 2), -1)) == F(21, 2)
    assert next_boundary_hit(state_at(1, 1)) is None
    assert next_boundary_hit(state_at(0, -1)) is None


def test_step_orders_hit_before_scheduled_switch():
    state = new_state(F(4, 3))
    first = step(state)
    assert (first.t, first.x, first.hit, first.switched) == (F(1), F(1), True, False)
    second = step(state)
    assert (second.t, second.x, second.switched) == (F(4, 3), F(4, 3), True)
    assert state.turning_points[0].alpha == F(4, 3)


def test_step_requires_future_event():
    dead = SimState(tau=F(7, 5), t=F(0), x=F(-2), slope=-1, pending=deque())
    assert detect_divergence(dead) == -1
    with pytest.raises(RuntimeError):
        step(dead)


# --- divergence ------------------------------------------------------------


def test_detect_divergence_cases():
    def state_at(x, slope, pending=()):
        return SimState(tau=F(63, 43), t=F(0), x=F(x), slope=slope, pending=deque(pending))

    assert detect_divergence(state_at(F(-23, 43), -1)) == -1
    assert detect_divergence(state_at(F(1, 2), -1)) is None  # will hit 0
    assert detect_divergence(state_at(F(2), 1)) == 1
    assert detect_divergence(state_at(F(-23, 43), -1, pending=[F(1)])) is None


# --- period detection ------------------------------------------------------


def test_detect_period_earliest_pair():
    a = Snapshot(1, F(0), (F(1),))
    b = Snapshot(-1, F(1, 2), (F(1), F(2)))
    c = Snapshot(1, F(1, 3), ())
    assert detect_period([a, b, c, b, a]) == (2, 4)
    assert detect_period([a, b, c]) is None
    assert detect_period([a, a]) == (1, 2)


def test_detect_period_distinguishes_offsets():
    a = Snapshot(1, F(0), (F(1),))
    b = Snapshot(1, F(0), (F(1), F(4, 3)))
    assert detect_period([a, b]) is None


# --- golden traces ---------------------------------------------------------


def test_golden_trace_tau_4_3():
    out = run(F(4, 3))
    assert isinstance(out, Periodic)
    assert out.switchings_per_period == 6
    assert out.least_period == 6
    assert out.start_switch == 1
    assert [p.alpha for p in out.turning_points] == [
        F(4, 3), F(1, 3), F(1), F(-1, 3), F(2, 3), F(0),
    ]


def test_golden_trace_theta_2():
    out = run(F(63, 43))
    assert isinstance(out, Divergent)
    assert (out.direction, out.total_switchings) == (-1, 9)
    assert [p.alpha for p in out.trace.turning_points] == [
        F(63, 43), F(20, 43), F(60, 43), F(14, 43), F(48, 43),
        F(-10, 43), F(0), F(-1), F(-23, 43),
    ]
    # the 8th turning point sits at -1, which is not in the critical set:
    # no hit may be recorded at that instant
    beta_8 = out.trace.turning_points[7].beta
    kinds_at_beta8 = {e.kind for e in out.trace.events if e.t == beta_8}
    assert kinds_at_beta8 == {"switch"}


def test_golden_trace_zeta_1():
    out = run(F(7, 5))
    assert isinstance(out, Divergent)
    assert (out.direction, out.total_switchings) == (-1, 9)
    # zeta is defined by the turning point landing exactly on 0 (switch 4)
    assert out.trace.turning_points[3].alpha == 0


def test_ten_point_window_147_100():
    tau = F(147, 100)
    out = run(tau)
    assert isinstance(out, Periodic)
    assert out.switchings_per_period == 10
    forms = [(1, 0), (1, -1), (3, -3), (5, -7), (11, -15),
             (21, -31), (43, -63), (43, -64), (1, -2), (-85, 124)]
    assert [p.alpha for p in out.turning_points] == [a * tau + b for a, b in forms]


def test_spec_window_145_99_is_eight_point():
    tau = F(145, 99)
    out = run(tau)
    assert isinstance(out, Periodic)
    assert out.switchings_per_period == 8
    forms = [(1, 0), (1, -1), (3, -3), (5, -7), (11, -15), (21, -31), (43, -63), (43, -64)]
    assert [p.alpha for p in out.turning_points] == [a * tau + b for a, b in forms]


def test_tangential_touch_at_tau_2():
    # at tau_k the turning point 2k+1 lands exactly on 1; the touch is a hit
    tau = F(16, 11)
    out = run(tau)
    assert isinstance(out, Periodic)
    assert out.switchings_per_period == 10  # 4k+2, k=2
    point = out.trace.turning_points[4]
    assert point.alpha == 1
    kinds = {e.kind for e in out.trace.events if e.t == point.beta}
    assert kinds == {"hit", "switch"}


def test_out_of_window_tau_runs_empirically():
    out = run(F(1, 2))
    assert isinstance(out, Periodic)
    assert out.switchings_per_period == 2
    out = run(F(2))  # above 3/2: still concludes on its own
    assert isinstance(out, (Periodic, Divergent))


def test_limits_give_undetermined():
    out = run(F(89, 66), max_switches=3)
    assert isinstance(out, Undetermined)
    assert out.switchings_executed == 3
    out = run(F(89, 66), max_time=F(2))
    assert isinstance(out, Undetermined)
    with pytest.raises(ValueError):
        run(F(89, 66), max_switches=0)
    with pytest.raises(ValueError):
        run(F(0))


# --- runtime invariants ----------------------------------------------------


def sample_taus():
    rng = random.Random(8675309)
    taus = [F(4, 3), F(16, 11), F(63, 43), F(7, 5), F(147, 100), F(145, 99)]
    taus += [random_tau_in_window(rng) for _ in range(30)]
    return taus


def test_unit_speed_between_events():
    for tau in sample_taus():
        events = run(tau).trace.events
        for a, b in zip(events, events[1:]):
            assert abs(b.x - a.x) == b.t - a.t


def test_delay_exactness_and_slope_parity():
    for tau in sample_taus():
        trace = run(tau).trace
        for point in trace.turning_points:
            assert point.beta - point.hit_time == tau
        state = new_state(tau)
        for _ in range(60):
            if detect_divergence(state) is not None:
                break
            step(state)
            assert state.slope == (1 if state.switch_count % 2 == 0 else -1)


def test_snapshot_offsets_invariant():
    for tau in sample_taus():
        state = new_state(tau)
        for _ in range(80):
            if detect_divergence(state) is not None:
                break
            step(state)
        for snap in state.snapshots:
            assert all(0 < off <= tau for off in snap.offsets)
            assert all(a < b for a, b in zip(snap.offsets, snap.offsets[1:]))


def test_simulation_matches_closed_forms_up_to_horizon():
    for tau in sample_taus():
        if not F(4, 3) < tau < F(3, 2):
            continue
        J = horizon_J(tau)
        points = run(tau).trace.turning_points
        assert len(points) >= J
        for j in range(1, J + 1):
            assert points[j - 1].beta == beta_closed(j, tau)
            assert points[j - 1].alpha == alpha_closed(j, tau)


def test_lemma_even_turning_points_positive():
    # for 2m+1 < J every even-indexed turning value is strictly positive
    for tau in sample_taus():
        if not F(4, 3) < tau < F(3, 2):
            continue
        J = horizon_J(tau)
        points = run(tau).trace.turning_points
        for m in range(1, (J - 2) // 2 + 1):
            if 2 * m + 1 < J:
                assert points[2 * m - 1].alpha > 0


def test_determinism():
    for tau in (F(4, 3), F(147, 100), F(63, 43)):
        assert run(tau) == run(tau)


def test_simulate_switches_replay():
    out = run(F(4, 3))
    replay = simulate_switches(F(4, 3), 13)
    assert len(replay.turning_points) == 13
    period = out.least_period
    for n in range(1, 7):
        a = replay.turning_points[n - 1]
        b = replay.turning_points[n + 5]
        assert b.beta - a.beta == period
        assert b.alpha == a.alpha


def test_behavior_labels_and_trace_records():
    assert behavior_label(run(F(4, 3))) == "periodic"
    assert behavior_label(run(F(63, 43))) == "divergent_minus_inf"
    assert behavior_label(run(F(89, 66), max_switches=2)) == "undetermined"
    records = trace_records(run(F(4, 3)).trace)
    assert records[0] == {"t": "0", "x": "0", "kind": "hit"}
    assert all(set(r) == {"t", "x", "kind"} for r in records)
    assert any(r["kind"] == "switch" for r in records)
