"""Shill command generation: worst-agent selection, the pull law, the
objective metric, and manual-command sanitization."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shillflock import (
    CommandSource,
    ContractError,
    ControlCommand,
    InvalidCommand,
    ModelParams,
    ScenarioViolation,
    ShillConstraint,
    UBetaParams,
    delta,
    step,
    u_beta,
    validate_manual,
    worst_agent,
)
from support import ang_close, make_state, shill_at

TAU = 2.0 * math.pi

section3_headings = st.floats(min_value=0.0, max_value=math.pi, exclude_max=True)
betas = st.floats(min_value=1e-6, max_value=math.pi - 1e-6)


def flat_state(headings, t=0, shill=None):
    return make_state([(float(i), 0.0) for i in range(len(headings))], headings, t=t, shill=shill)


# ---------------------------------------------------------------------------
# worst agent and delta


def test_worst_agent_examples():
    assert worst_agent(flat_state([0.5, 0.2, 0.9])) == 2
    assert worst_agent(flat_state([0.2, 0.2])) == 1
    assert worst_agent(flat_state([0.0])) == 1


def test_worst_agent_scenario_violation_names_agent_and_tick():
    state = flat_state([0.5, math.pi, 0.9], t=7)
    with pytest.raises(ScenarioViolation) as exc:
        worst_agent(state)
    assert exc.value.agent == 2
    assert exc.value.tick == 7
    assert "agent 2" in str(exc.value)
    assert "tick 7" in str(exc.value)


def test_delta_examples():
    assert delta(flat_state([math.pi / 4, math.pi / 2])) == pytest.approx(3 * math.pi / 4)
    assert delta(flat_state([math.pi - 1e-9])) == pytest.approx(1e-9, rel=1e-6)
    assert delta(flat_state([0.0, 0.0, 0.0])) == math.pi


def test_delta_scenario_violation():
    with pytest.raises(ScenarioViolation):
        delta(flat_state([3.5]))


@given(st.lists(section3_headings, min_size=1, max_size=9))
def test_delta_range_and_argmin(headings):
    state = flat_state(headings)
    d = delta(state)
    assert 0.0 < d <= math.pi
    s = worst_agent(state)
    assert headings[s - 1] == min(headings)
    assert s - 1 == headings.index(min(headings))


@given(st.lists(section3_headings, min_size=1, max_size=9),
       st.floats(min_value=-50, max_value=50), st.floats(min_value=-50, max_value=50),
       st.randoms(use_true_random=False))
def test_worst_agent_translation_and_permutation_invariance(headings, dx, dy, rnd):
    state = flat_state(headings)
    s = worst_agent(state)
    shifted = make_state(state.positions + np.array([dx, dy]), headings)
    assert worst_agent(shifted) == s
    perm = list(range(len(headings)))
    rnd.shuffle(perm)
    permuted = flat_state([headings[p] for p in perm])
    sp = worst_agent(permuted)
    # the selected heading value is what is permutation-invariant
    assert permuted.headings[sp - 1] == state.headings[s - 1]


# ---------------------------------------------------------------------------
# the pull law


def test_u_beta_branch_one():
    state = flat_state([0.3, 1.0])
    cmd = u_beta(state, UBetaParams(math.pi / 2))
    assert cmd.heading == pytest.approx(0.3 + math.pi / 2)
    assert (cmd.x, cmd.y) == (0.0, 0.0)
    assert cmd.source is CommandSource.U_BETA


def test_u_beta_branch_two_caps_at_pi():
    state = flat_state([3.0, 3.1])
    cmd = u_beta(state, UBetaParams(math.pi / 2))
    assert cmd.heading == math.pi


def test_u_beta_boundary_is_branch_one():
    state = flat_state([math.pi / 2])
    cmd = u_beta(state, UBetaParams(math.pi / 2))
    assert cmd.heading == math.pi  # pi/2 + pi/2, inclusive <= boundary


def test_u_beta_places_shill_on_worst_agent_exactly():
    state = make_state([(0.123456, -9.87), (4.0, 4.0)], [1.2, 0.4])
    cmd = u_beta(state, UBetaParams(1.0))
    assert (cmd.x, cmd.y) == (4.0, 4.0)


def test_u_beta_propagates_scenario_violation():
    with pytest.raises(ScenarioViolation):
        u_beta(flat_state([math.pi]), UBetaParams(1.0))


def test_u_beta_params_range():
    for bad in (0.0, math.pi, -1.0, math.nan):
        with pytest.raises(ContractError):
            UBetaParams(bad)


@given(st.lists(section3_headings, min_size=1, max_size=9), betas)
def test_u_beta_output_exceeds_worst_and_caps_at_pi(headings, beta):
    state = flat_state(headings)
    cmd = u_beta(state, UBetaParams(beta))
    theta_s = min(headings)
    assert theta_s < cmd.heading <= math.pi


# ---------------------------------------------------------------------------
# monotone pull under closed-loop stepping (small scale; the acceptance suite
# re-checks this across 200 randomized runs)


@settings(max_examples=25, deadline=None)
@given(st.lists(section3_headings, min_size=2, max_size=6), betas,
       st.sampled_from([0.0, 0.03, 0.1]), st.sampled_from([0.5, 1.0, 5.0]))
def test_u_beta_stepping_is_monotone_and_stays_below_pi(headings, beta, v, r):
    state = flat_state(headings)
    params = ModelParams(n=len(headings), v=v, r=r)
    ub = UBetaParams(beta)
    prev = delta(state)
    for _ in range(40):
        state = step(state, params, u_beta(state, ub))
        assert state.degenerate_agents == ()
        assert np.all(state.headings < math.pi)
        d = delta(state)
        assert d <= prev + 1e-12
        prev = d


# ---------------------------------------------------------------------------
# manual command sanitization


def test_validate_manual_normalizes_heading():
    state = flat_state([0.5])
    raw = ControlCommand(0.0, 0.0, 7.0, CommandSource.MANUAL)
    out = validate_manual(raw, state, ModelParams(n=1))
    assert out.heading == pytest.approx(7.0 - TAU)


def test_validate_manual_unconstrained_passthrough():
    state = flat_state([0.5], shill=shill_at(0.0, 0.0, 0.0))
    raw = ControlCommand(123.0, -456.0, 1.0, CommandSource.MANUAL)
    out = validate_manual(raw, state, ModelParams(n=1, v=0.03))
    assert (out.x, out.y) == (123.0, -456.0)


def test_validate_manual_clamps_constrained_jump():
    params = ModelParams(n=1, v=0.03, shill_constraint=ShillConstraint.KINEMATICALLY_CONSTRAINED)
    state = flat_state([0.5], shill=shill_at(0.0, 0.0, 0.0))
    raw = ControlCommand(0.6, 0.8, 0.0, CommandSource.MANUAL)  # length 1.0 request
    out = validate_manual(raw, state, params)
    assert math.hypot(out.x, out.y) == pytest.approx(0.03)
    assert out.y / out.x == pytest.approx(0.8 / 0.6)


def test_validate_manual_constrained_without_previous_shill_passes_through():
    params = ModelParams(n=1, v=0.03, shill_constraint=ShillConstraint.KINEMATICALLY_CONSTRAINED)
    state = flat_state([0.5])
    raw = ControlCommand(2.0, 3.0, 0.0, CommandSource.MANUAL)
    out = validate_manual(raw, state, params)
    assert (out.x, out.y) == (2.0, 3.0)


def test_validate_manual_rejects_non_finite():
    state = flat_state([0.5])
    with pytest.raises(InvalidCommand):
        validate_manual(ControlCommand(math.nan, 0.0, 0.0, CommandSource.MANUAL),
                        state, ModelParams(n=1))


def test_validate_manual_requires_manual_source():
    state = flat_state([0.5])
    with pytest.raises(ContractError):
        validate_manual(ControlCommand(0, 0, 0, CommandSource.U_BETA), state, ModelParams(n=1))


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=-1e6, max_value=1e6),
       st.floats(min_value=-20, max_value=20))
def test_validate_manual_heading_always_normalized(x, y, heading):
    state = flat_state([0.5], shill=shill_at(0.0, 0.0, 0.0))
    out = validate_manual(ControlCommand(x, y, heading, CommandSource.MANUAL),
                          state, ModelParams(n=1))
    assert 0.0 <= out.heading < TAU
    assert ang_close(out.heading, heading, 1e-9)
