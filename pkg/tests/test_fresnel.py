import math

import numpy as np
import pytest
from scipy import integrate

from opfeyn import (AtomicMeasure, Envelope, EtaAtoms, EtaDensity, EtaGaussian,
                    FresnelFunctional, LineMeasure, MeasureUnderflow,
                    MismatchedScalePair, RngStream, UnknownExample,
                    UnsupportedVariant, b_element, convolve, eval_F,
                    eval_from_projections, gallery, kq0_integral,
                    monomial_element, s_star, sample_path, total_norm,
                    unit_functional, zero_element)


def test_eta_gaussian_hat_oracle():
    eta = EtaGaussian(mean=0.7, var=2.0, scale=1.5 - 0.5j)
    u = np.array([-1.0, 0.0, 2.5])
    expected = (1.5 - 0.5j) * np.exp(-0.5 * 2.0 * u * u + 1j * 0.7 * u)
    assert np.allclose(eta.hat(u), expected, atol=1e-15)
    assert abs(eta.total_mass() - abs(1.5 - 0.5j)) < 1e-15
    with pytest.raises(ValueError):
        EtaGaussian(mean=0.0, var=0.0)


def test_eta_gaussian_exp_moment_vs_quad():
    eta = EtaGaussian(mean=0.4, var=1.3, scale=2.0)
    for mu in (0.0, 0.5, 1.7):
        pdf = lambda v: (2.0 / math.sqrt(2 * math.pi * 1.3)
                         * math.exp(-(v - 0.4) ** 2 / (2 * 1.3)))
        ref, _ = integrate.quad(lambda v: math.exp(mu * abs(v)) * pdf(v),
                                -60, 60, epsabs=1e-13, epsrel=1e-13)
        assert abs(eta.exp_moment(mu) - ref) < 1e-9 * ref


def test_eta_atoms():
    eta = EtaAtoms(atoms=((1.0, 2.0 + 0.0j), (-0.5, 1.0j)))
    u = np.array([0.3])
    expected = 2.0 * np.exp(1j * 0.3) + 1j * np.exp(-1j * 0.15)
    assert abs(eta.hat(u)[0] - expected) < 1e-14
    assert abs(eta.total_mass() - 3.0) < 1e-15
    assert abs(eta.exp_moment(1.0)
               - (2.0 * math.e + math.exp(0.5))) < 1e-12


def test_eta_density_matches_gaussian():
    rho = lambda v: np.exp(-0.5 * v * v) / math.sqrt(2 * math.pi)
    eta = EtaDensity(fn=rho, radius=12.0,
                     envelope=Envelope("gaussian", scale=0.4, rate=0.5))
    ref = EtaGaussian(mean=0.0, var=1.0)
    u = np.linspace(-3, 3, 7)
    assert np.max(np.abs(eta.hat(u) - ref.hat(u))) < 1e-10
    assert abs(eta.total_mass() - 1.0) < 1e-10


def test_eta_density_tail_check():
    rho = lambda v: np.exp(-np.abs(v))
    with pytest.raises(MeasureUnderflow):
        EtaDensity(fn=rho, radius=3.0,
                   envelope=Envelope("exponential", scale=1.0, rate=1.0))
    # same density with a wide enough window passes
    eta = EtaDensity(fn=rho, radius=40.0,
                     envelope=Envelope("exponential", scale=1.0, rate=1.0))
    assert abs(eta.total_mass() - 2.0) < 3e-6
    # exponential weight at the envelope rate diverges
    assert eta.exp_moment(1.0) == math.inf
    with pytest.raises(ValueError):
        EtaDensity(fn=rho, radius=-1.0)


def test_eval_consistency_atomic(wiener):
    w1 = b_element(wiener)
    w2 = monomial_element(wiener, 1)
    F = FresnelFunctional(AtomicMeasure(sp=wiener, atoms=(
        (0.7 + 0.2j, w1), (-0.3j, w2))), label="test")
    path = sample_path(wiener, 256, RngStream(seed=3))
    from opfeyn import pwz
    direct = (0.7 + 0.2j) * np.exp(1j * pwz(w1, path)) \
        + (-0.3j) * np.exp(1j * pwz(w2, path))
    assert abs(eval_F(F, path) - direct) < 1e-12
    proj = np.array([[pwz(w1, path), pwz(w2, path)]])
    assert abs(eval_from_projections(F, proj)[0] - direct) < 1e-12


def test_eval_consistency_line(wiener):
    F = gallery("F3", wiener)
    path = sample_path(wiener, 256, RngStream(seed=4))
    from opfeyn import pwz
    u = pwz(s_star(b_element(wiener)), path)
    # gaussian eta with var 2: transform exp(-u^2)
    assert abs(eval_F(F, path) - math.exp(-u * u)) < 1e-12


def test_total_norm(wiener):
    F = FresnelFunctional(AtomicMeasure(sp=wiener, atoms=(
        (3.0 + 4.0j, b_element(wiener)), (1.0, monomial_element(wiener, 1)))))
    assert abs(total_norm(F) - 6.0) < 1e-15


def test_unit_functional_is_one(wiener):
    F = unit_functional(wiener)
    path = sample_path(wiener, 64, RngStream(seed=6))
    assert abs(eval_F(F, path) - 1.0) < 1e-15
    assert abs(kq0_integral(F, 0.5).value - 1.0) < 1e-15


def test_kq0_atoms_oracle(drifted):
    # exp-moment integral: sum |c| exp(||w|| ||a|| / sqrt(2 q0))
    w = b_element(drifted)
    F = FresnelFunctional(AtomicMeasure(sp=drifted, atoms=((2.0 + 0.0j, w),)))
    norm_a = 0.3 * math.sqrt(math.log(2.0))
    expected = 2.0 * math.exp(w.norm * norm_a / math.sqrt(1.0))
    res = kq0_integral(F, 0.5)
    assert res.member
    assert abs(res.value - expected) < 1e-9 * expected


def test_kq0_divergence_flagged(drifted):
    # exponential-envelope density: the exponential moment diverges once
    # the weight rate reaches the envelope rate, so membership fails
    rho = lambda v: np.exp(-np.abs(v))
    eta = EtaDensity(fn=rho, radius=40.0,
                     envelope=Envelope("exponential", scale=1.0, rate=1.0))
    w0 = b_element(drifted).scaled(10.0)
    F = FresnelFunctional(LineMeasure(w0=w0, eta=eta))
    res = kq0_integral(F, 0.5)
    assert not res.member
    assert res.value == math.inf


def test_convolution_transform_product(wiener):
    w1 = b_element(wiener)
    w2 = monomial_element(wiener, 1)
    F = FresnelFunctional(AtomicMeasure(sp=wiener, atoms=((0.5, w1), (0.5j, w2))),
                          label="F")
    G = FresnelFunctional(AtomicMeasure(sp=wiener, atoms=((1.0, w2),)), label="G")
    FG = convolve(F, G)
    for k in range(5):
        path = sample_path(wiener, 128, RngStream(seed=100 + k))
        lhs = eval_F(FG, path)
        rhs = eval_F(F, path) * eval_F(G, path)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_convolution_variant_errors(wiener, drifted):
    F_line = gallery("F3", wiener)
    F_atom = unit_functional(wiener)
    with pytest.raises(UnsupportedVariant):
        convolve(F_line, F_atom)
    with pytest.raises(MismatchedScalePair):
        convolve(F_atom, unit_functional(drifted))


def test_atomic_measure_checks_pairs(wiener, drifted):
    with pytest.raises(MismatchedScalePair):
        AtomicMeasure(sp=wiener, atoms=((1.0 + 0j, b_element(drifted)),))


def test_gallery_dispatch(wiener):
    assert gallery("F3", wiener).label == "F3"
    assert gallery("F4", wiener).label == "F4"
    with pytest.raises(ValueError):
        gallery("F2", wiener, w0=b_element(wiener), mean=0.0, var=0.0)
    with pytest.raises(UnknownExample):
        gallery("F9", wiener)


def test_describe_round_trips(wiener):
    d = gallery("F3", wiener).describe()
    assert d["variant"] == "line"
    assert d["eta"]["kind"] == "gaussian"
    d2 = unit_functional(wiener).describe()
    assert d2["variant"] == "atoms"
