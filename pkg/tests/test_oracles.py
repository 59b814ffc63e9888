import math

import numpy as np
import pytest

from nmgauss.errors import DomainError
from nmgauss.gaussian import entropy_f, symplectic_eigenvalues, thermal_state, twb_state
from nmgauss.markers import log_negativity
from nmgauss.oracles import OdeOptions, discord_grid_oracle, ode_covariance, photon_statistics
from nmgauss.propagation import rotation
from nmgauss.spectral import BathSpec

TIGHT = OdeOptions(rtol=1e-12, atol=1e-14)


def test_ode_identity_at_zero(bath10):
    s0 = twb_state(1, 0.2)
    np.testing.assert_array_equal(ode_covariance(s0, 0.0, bath10), s0)
    out = ode_covariance(s0, [0.0, 0.0], bath10, "common")
    assert out.shape == (2, 4, 4)


def test_ode_closed_system_rotation():
    bath = BathSpec(10.0, 0.0, 100.0)
    s0 = twb_state(2, 0.3)
    for topology in ("independent", "common"):
        s = ode_covariance(s0, 4.0, bath, topology, options=TIGHT)
        rr = np.kron(np.eye(2), rotation(4.0, 0.1))
        np.testing.assert_allclose(s, rr @ s0 @ rr.T, rtol=0, atol=1e-10)


def test_ode_closed_system_conserves_spectrum():
    bath = BathSpec(10.0, 0.0, 100.0)
    s0 = twb_state(1, 1.5)
    for s in ode_covariance(s0, np.linspace(0, 5, 21), bath, options=TIGHT):
        np.testing.assert_allclose(symplectic_eigenvalues(s), [2.0, 2.0], rtol=0, atol=1e-10)


def test_ode_common_vacuum_stays_separable_literal(bath10):
    # the moment equation of the master equation itself keeps the vacuum separable
    states = ode_covariance(twb_state(0, 0), np.linspace(0, 5, 26), bath10, "common", damping="literal")
    assert max(log_negativity(s) for s in states) < 1e-12


def test_ode_common_vacuum_secular_model(bath10):
    # isotropic damping + anisotropic diffusion: a trace of squeezing, ~1e-5
    states = ode_covariance(twb_state(0, 0), np.linspace(0, 5, 26), bath10, "common")
    neg = max(log_negativity(s) for s in states)
    assert 1e-6 < neg < 1e-4


def test_ode_damping_models_differ(bath10):
    s0 = twb_state(2, 0)
    a = ode_covariance(s0, 5.0, bath10, damping="secular")
    b = ode_covariance(s0, 5.0, bath10, damping="literal")
    assert 1e-3 < np.max(np.abs(a - b)) < 1e-1
    with pytest.raises(ValueError):
        ode_covariance(s0, 1.0, bath10, damping="other")


def test_ode_renormalization_option(bath10):
    s0 = twb_state(2, 0)
    a = ode_covariance(s0, 2.0, bath10)
    b = ode_covariance(s0, 2.0, bath10, include_renormalization=True)
    assert np.max(np.abs(a - b)) > 1e-4


def test_ode_input_checks(bath10):
    with pytest.raises(DomainError):
        ode_covariance(twb_state(1, 0), [1.0, 0.5], bath10)
    with pytest.raises(ValueError):
        ode_covariance(twb_state(1, 0), 1.0, bath10, "shared")
    with pytest.raises(DomainError):
        OdeOptions(rtol=0)


def test_photon_statistics_examples():
    st = photon_statistics(0.5 * np.eye(4))
    assert all(abs(v) < 1e-15 for v in (st.n1, st.n2, st.var_n1, st.var_n2, st.n1n2))
    n = 2.5
    st = photon_statistics(thermal_state(n))
    assert st.n1 == pytest.approx(n) and st.var_n1 == pytest.approx(n * n + n)
    assert st.covariance == pytest.approx(0.0, abs=1e-12)
    r = 0.9
    st = photon_statistics(twb_state(r, 0))
    assert st.n1 == pytest.approx(math.sinh(r) ** 2) and st.n2 == pytest.approx(math.sinh(r) ** 2)
    assert st.var_difference == pytest.approx(0.0, abs=1e-12)


def test_photon_statistics_single_mode_squeezed():
    # squeezed vacuum: <n> = sinh^2 s, var n = 2 sinh^2 s cosh^2 s
    s = 0.6
    sig = np.diag([math.exp(2 * s), math.exp(-2 * s), 1.0, 1.0]) / 2
    st = photon_statistics(sig)
    assert st.n1 == pytest.approx(math.sinh(s) ** 2, rel=1e-12)
    assert st.var_n1 == pytest.approx(2 * (math.sinh(s) * math.cosh(s)) ** 2, rel=1e-12)


def test_grid_oracle_examples():
    assert discord_grid_oracle(thermal_state(1.0)) == pytest.approx(0.0, abs=1e-12)
    res = discord_grid_oracle(twb_state(1, 0), details=True)
    assert res.rho == 0.0
    assert res.discord == pytest.approx(entropy_f(math.cosh(2) / 2), abs=1e-9 + res.resolution)
