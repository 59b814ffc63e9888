"""Randomized invariants beyond the acceptance suite."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmgauss.gaussian import (
    entropy_f,
    local_rotation,
    partial_transpose,
    random_physical_state,
    twb_state,
    validate_physical,
)
from nmgauss.markers import classical_correlations, gaussian_discord, log_negativity
from nmgauss.propagation import propagate
from nmgauss.spectral import BathSpec, coefficients_closed_form, coefficients_quadrature

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=100, deadline=None, derandomize=True)


@SETTINGS
@given(seeds)
def test_partial_transpose_preserves_det(seed):
    s = random_physical_state(np.random.default_rng(seed))
    assert np.linalg.det(partial_transpose(s)) == pytest.approx(np.linalg.det(s), rel=1e-10)


@SETTINGS
@given(st.floats(0.01, 3.0), st.floats(0.0, 5.0))
def test_twb_cross_block_det_negative(r, n):
    s = twb_state(r, n)
    c = (n + 0.5) * math.sinh(2 * r)
    assert np.linalg.det(s[:2, 2:]) == pytest.approx(-c * c, rel=1e-12)
    assert np.linalg.det(s[:2, 2:]) < 0


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.sampled_from([0.2, 1.0, 10.0]), st.floats(0.05, 10.0))
def test_closed_form_vs_quadrature(x, tau):
    bath = BathSpec(x, 0.1, 100.0)
    q = coefficients_quadrature(tau, bath, thermal="high_t")
    c = coefficients_closed_form(tau, bath)
    for name in ("delta", "pi", "gamma"):
        ref = getattr(q, name)
        # relative error, measured against the coefficient's overall scale near sign changes
        scale = max(abs(ref), 1e-3 * abs(getattr(coefficients_closed_form(50.0, bath), name)))
        assert abs(getattr(c, name) - ref) <= 1e-5 * scale


@SETTINGS
@given(st.floats(0.1, 20.0), st.floats(10.0, 1000.0), st.floats(0.0, 30.0))
def test_temperature_dependence(x, temp, tau):
    a = coefficients_closed_form(tau, BathSpec(x, 0.1, temp))
    b = coefficients_closed_form(tau, BathSpec(x, 0.1, 2 * temp))
    assert b.delta == pytest.approx(2 * a.delta, rel=1e-12, abs=1e-300)
    assert b.pi == pytest.approx(2 * a.pi, rel=1e-12, abs=1e-300)
    assert b.gamma == a.gamma


@SETTINGS
@given(seeds, st.floats(0.0, 20.0), st.sampled_from(["independent", "common"]))
def test_propagated_states_physical_and_symmetric(seed, tau, topology):
    rng = np.random.default_rng(seed)
    s0 = random_physical_state(rng)
    bath = BathSpec(float(rng.choice([0.2, 1.0, 10.0])), 0.1, 100.0)
    kw = {"path": "generic"} if topology == "common" else {}
    s = propagate(s0, tau, bath, topology, **kw)
    np.testing.assert_allclose(s, s.T, atol=1e-12 * max(1, np.max(np.abs(s))))
    assert validate_physical(s).ok


@settings(max_examples=100, deadline=None, derandomize=True)
@given(seeds)
def test_discord_continuity(seed):
    rng = np.random.default_rng(seed)
    s = random_physical_state(rng, max_thermal=2.0)
    e = rng.normal(size=(4, 4))
    e = (e + e.T) / np.linalg.norm(e + e.T)
    # push the state away from the uncertainty boundary so s + eps*E stays physical
    s = s + 1e-3 * np.eye(4)
    d0 = gaussian_discord(s).discord
    d1 = gaussian_discord(s + 1e-6 * e).discord
    assert abs(d1 - d0) < 1e-4


@settings(max_examples=100, deadline=None, derandomize=True)
@given(seeds, st.floats(0.0, 2 * math.pi))
def test_local_rotation_invariance(seed, theta):
    s = random_physical_state(np.random.default_rng(seed))
    rot = local_rotation(theta)
    t = rot @ s @ rot.T
    assert log_negativity(t) == pytest.approx(log_negativity(s), abs=1e-7)
    assert gaussian_discord(t).discord == pytest.approx(gaussian_discord(s).discord, abs=1e-7)


@settings(max_examples=100, deadline=None, derandomize=True)
@given(st.floats(0.0, 2.0), st.floats(0.0, 5.0), st.floats(0.0, 5.0),
       st.sampled_from(["independent", "common"]))
def test_classical_correlations_nonnegative_on_propagated(r, n, tau, topology):
    s = propagate(twb_state(r, n), tau, BathSpec(10.0, 0.1, 100.0), topology)
    assert classical_correlations(s) >= -1e-9


def test_entropy_clamp_window():
    assert entropy_f(0.5 - 5e-10) == 0.0
    assert entropy_f(0.5 + 1e-12) == pytest.approx(0.0, abs=1e-10)
