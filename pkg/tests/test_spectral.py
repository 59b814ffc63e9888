import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from nmgauss.errors import DomainError, UnsupportedFamilyError
from nmgauss.spectral import (
    BathSpec,
    ClosedFormModel,
    SpectralFamily,
    TabulatedModel,
    bose_occupation,
    coefficient_model,
    coefficients,
    coefficients_closed_form,
    coefficients_quadrature,
    spectral_density,
)


def test_bath_validation():
    b = BathSpec(10.0)
    assert b.omega0 * b.resonance_ratio == 1.0
    for bad in (dict(resonance_ratio=0.0), dict(resonance_ratio=1.0, coupling=-0.1),
                dict(resonance_ratio=1.0, temperature_ratio=-1.0)):
        with pytest.raises(DomainError):
            BathSpec(**bad)
    with pytest.raises(DomainError):
        BathSpec(1.0, family=SpectralFamily.TABULATED)


def test_spectral_density_values():
    b = BathSpec(1.0)
    assert spectral_density(0.0, b) == 0.0
    assert spectral_density(1.0, b) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    w = 1e8
    assert spectral_density(w, b) * math.pi * w == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        spectral_density(-1.0, b)


def test_bose_occupation():
    assert bose_occupation(1.0, 100.0) == pytest.approx(1 / math.expm1(0.01), rel=1e-14)
    # series 1/(e^y - 1) = 1/y - 1/2 + y/12 - ...
    assert bose_occupation(1.0, 100.0) == pytest.approx(100 - 0.5 + 0.01 / 12, abs=1e-8)
    assert bose_occupation(1.0, 100.0) == pytest.approx(99.500, abs=1e-3)
    assert bose_occupation(3.0, 0.0) == 0.0
    high_t = 2 * bose_occupation(1.0, 100.0) + 1
    assert high_t == pytest.approx(2 * 100.0 / 1.0, rel=1e-4)


def test_coefficients_vanish_at_zero():
    b = BathSpec(10.0)
    for cs in (coefficients_closed_form(0.0, b), coefficients_quadrature(0.0, b)):
        assert (cs.delta, cs.pi, cs.gamma, cs.r_ren) == (0.0, 0.0, 0.0, 0.0)


def test_gamma_asymptote_x10():
    b = BathSpec(10.0)
    expected = 0.01 * 0.1 * 100 / (2 * 101)
    assert expected == pytest.approx(4.9505e-4, rel=1e-4)
    assert coefficients_closed_form(60.0, b).gamma == pytest.approx(expected, rel=1e-12)
    assert coefficients_quadrature(60.0, b, thermal="high_t").gamma == pytest.approx(expected, rel=1e-5)


def test_quadrature_matches_closed_form_tau5():
    b = BathSpec(10.0)
    q = coefficients_quadrature(5.0, b, thermal="high_t")
    c = coefficients_closed_form(5.0, b)
    for name in ("delta", "pi", "gamma"):
        assert getattr(q, name) == pytest.approx(getattr(c, name), rel=1e-6)


def test_bose_weight_is_twice_high_t():
    # 2N+1 -> 2T/w at high temperature, hence the factor 2 for Delta and Pi
    b = BathSpec(10.0)
    q = coefficients_quadrature(2.0, b, thermal="bose")
    c = coefficients_closed_form(2.0, b)
    assert q.delta / c.delta == pytest.approx(2.0, rel=2e-3)
    assert q.pi / c.pi == pytest.approx(2.0, rel=2e-3)
    assert q.gamma == pytest.approx(c.gamma, rel=1e-8)


def test_delta_over_gamma_asymptote():
    for x in (0.2, 1.0, 10.0):
        b = BathSpec(x, 0.1, 100.0)
        c = coefficients_closed_form(80.0, b)
        assert c.delta / c.gamma == pytest.approx(x * 100.0, rel=1e-9)


def test_sign_structure_x02():
    # for x = 0.2 it is Delta, not gamma, that turns negative
    b = BathSpec(0.2, 0.1, 100.0)
    tau = np.linspace(0, 40, 4001)
    c = coefficients_closed_form(tau, b)
    assert np.min(c.delta) < 0
    assert np.all(c.gamma >= 0)


def test_gamma_nonnegative_for_x_ge_1():
    tau = np.linspace(0, 40, 4001)
    for x in (1.0, 2.0, 10.0, 50.0):
        assert np.all(coefficients_closed_form(tau, BathSpec(x)).gamma >= 0)


def test_temperature_scaling_closed_form():
    lo, hi = BathSpec(1.0, 0.1, 50.0), BathSpec(1.0, 0.1, 200.0)
    a, b = coefficients_closed_form(3.0, lo), coefficients_closed_form(3.0, hi)
    assert b.delta == pytest.approx(4 * a.delta, rel=1e-14)
    assert b.pi == pytest.approx(4 * a.pi, rel=1e-14)
    assert b.gamma == a.gamma


def test_dispatcher_threshold():
    assert BathSpec(1.0, 0.1, 10.0).uses_closed_form
    assert not BathSpec(1.0, 0.1, 9.99).uses_closed_form
    low = coefficients(1.0, BathSpec(1.0, 0.1, 1.0))
    assert low.r_ren_available


def test_zero_temperature_quadrature():
    b = BathSpec(1.0, 0.1, 0.0)
    c = coefficients_quadrature(2.0, b)
    assert math.isfinite(c.delta) and c.error_estimate < 1e-7


def test_closed_form_needs_ohmic():
    b = BathSpec(1.0, family="tabulated", table=((0.0, 1.0, 2.0), (0.0, 0.2, 0.1)))
    with pytest.raises(UnsupportedFamilyError):
        coefficients_closed_form(1.0, b)
    c = coefficients_quadrature(1.0, b, epsabs=1e-8)
    assert c.gamma != 0.0


def test_tabulated_family_against_plain_double_integral():
    # triangle J on [0, 2]: the frequency integral is finite, so a plain
    # 2-D cubature (no Fourier weights) is an independent reference
    b = BathSpec(1.0, 0.1, 1.0, family="tabulated", table=((0.0, 1.0, 2.0), (0.0, 0.2, 0.0)))
    c = coefficients_quadrature(1.5, b, epsabs=1e-9)

    def jw(w):
        return float(np.interp(w, [0, 1, 2], [0, 0.2, 0]))

    def ref(kernel):
        return 0.01 * dblquad(kernel, 0, 1.5, 0, 2, epsabs=1e-13)[0]

    def noise(w, s):
        weight = jw(w) / math.tanh(w / 2) if w > 0 else 0.4
        return weight * math.cos(w * s) * math.cos(s)

    assert c.delta == pytest.approx(ref(noise), rel=1e-9)
    assert c.gamma == pytest.approx(ref(lambda w, s: jw(w) * math.sin(w * s) * math.sin(s)), rel=1e-9)
    assert c.r_ren == pytest.approx(ref(lambda w, s: jw(w) * math.sin(w * s) * math.cos(s)), rel=1e-9)


def test_closed_form_model_gamma_integral():
    from scipy.integrate import quad

    b = BathSpec(0.2, 0.1, 100.0)
    m = ClosedFormModel(b)
    for t in (0.3, 2.0, 17.0):
        ref = 2 * quad(m.gamma, 0, t, epsabs=1e-15, limit=200)[0]
        assert m.big_gamma(t) == pytest.approx(ref, rel=1e-10, abs=1e-16)


def test_renormalization_closed_vs_quadrature():
    b = BathSpec(1.0, 0.1, 100.0)
    m = ClosedFormModel(b)
    q = coefficients_quadrature(2.5, b, thermal="high_t")
    assert m.renormalization(2.5) == pytest.approx(q.r_ren, rel=1e-6)


def test_tabulated_model_matches_direct_quadrature():
    b = BathSpec(10.0, 0.1, 5.0)
    m = coefficient_model(b, 2.0)
    assert isinstance(m, TabulatedModel)
    direct = coefficients_quadrature(1.3, b)
    assert m.delta(1.3) == pytest.approx(direct.delta, rel=1e-7)
    assert m.gamma(1.3) == pytest.approx(direct.gamma, rel=1e-7)
    with pytest.raises(DomainError):
        m.delta(2.5)
    assert coefficient_model(b, 2.0) is m
