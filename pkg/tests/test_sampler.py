import math

import numpy as np
import pytest

from opfeyn import (GridMismatch, InvalidGrid, NotOrthonormal, RngStream,
                    a_unit_element, b_element, cylinder_expectation,
                    monomial_element, pair_with_a, pwz, sample_increments,
                    sample_path)
from opfeyn.sampler import left_densities, pwz_batch


def test_stream_determinism():
    g1 = RngStream(seed=42, stream_id=3).generator()
    g2 = RngStream(seed=42, stream_id=3).generator()
    assert np.array_equal(g1.standard_normal(100), g2.standard_normal(100))


def test_stream_separation():
    a = RngStream(seed=42, stream_id=0).generator().standard_normal(100)
    b = RngStream(seed=42, stream_id=1).generator().standard_normal(100)
    c = RngStream(seed=43, stream_id=0).generator().standard_normal(100)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_batch_keying_is_stable():
    s = RngStream(seed=7, stream_id=2)
    x0 = s.generator(batch=0).standard_normal(10)
    x5 = s.generator(batch=5).standard_normal(10)
    assert np.array_equal(x5, RngStream(7, 2).generator(batch=5).standard_normal(10))
    assert not np.array_equal(x0, x5)


def test_child_streams_differ():
    s = RngStream(seed=7, stream_id=0)
    a = s.child(1).generator().standard_normal(8)
    b = s.child(2).generator().standard_normal(8)
    assert not np.array_equal(a, b)


def test_sample_increment_moments(drifted, gen):
    # increments are N(da, db) over each step; check first two moments
    n = 40000
    t, dx = sample_increments(drifted, 16, n, gen)
    da = np.diff(drifted.a(t))
    db = np.diff(drifted.b(t))
    se_mean = np.sqrt(db / n)
    assert np.all(np.abs(dx.mean(axis=0) - da) < 4.0 * se_mean)
    se_var = db * math.sqrt(2.0 / (n - 1))
    assert np.all(np.abs(dx.var(axis=0, ddof=1) - db) < 4.0 * se_var)


def test_sample_path_starts_at_zero(wiener):
    p = sample_path(wiener, 64, RngStream(seed=1))
    assert p.x[0] == 0.0
    assert p.x.size == 65
    assert p.t_grid.size == 65


def test_invalid_grid(wiener, gen):
    with pytest.raises(InvalidGrid):
        sample_increments(wiener, 0, 5, gen)


def test_pwz_gaussian_law(drifted):
    # (w, x)~ is N((w,a), ||w||^2); test both moments at 4 sigma
    w = b_element(drifted)
    n = 40000
    t, dx = sample_increments(drifted, 256, n, RngStream(seed=5).generator())
    proj = pwz_batch(left_densities([w], t), dx)[:, 0]
    mean, var = pair_with_a(w), w.norm_sq
    assert abs(proj.mean() - mean) < 4.0 * math.sqrt(var / n)
    assert abs(proj.var(ddof=1) - var) < 4.0 * var * math.sqrt(2.0 / (n - 1))


def test_pwz_single_path_matches_batch(drifted):
    w = monomial_element(drifted, 1)
    path = sample_path(drifted, 128, RngStream(seed=9))
    single = pwz(w, path)
    batch = pwz_batch(left_densities([w], path.t_grid),
                      np.diff(path.x)[None, :])[0, 0]
    assert abs(single - batch) < 1e-12


def test_pwz_grid_mismatch(wiener, drifted):
    path = sample_path(wiener, 32, RngStream(seed=2))
    with pytest.raises(GridMismatch):
        pwz(b_element(drifted), path)


def test_cylinder_second_moment(wiener, drifted):
    # E[(e,x)~^2] = 1 + (e,a)^2 for a unit direction
    e = b_element(wiener)
    val = cylinder_expectation(lambda u: u * u, [e])
    assert abs(val - 1.0) < 1e-10

    e2 = a_unit_element(drifted)
    m = pair_with_a(e2)
    val2 = cylinder_expectation(lambda u: u * u, [e2])
    assert abs(val2 - (1.0 + m * m)) < 1e-10


def test_cylinder_product_of_orthonormal(wiener):
    # independent coordinates: E[u1 u2] = m1 m2 = 0 on the driftless pair
    e1 = b_element(wiener)
    e2 = combine_orthonormal(wiener)
    val = cylinder_expectation(lambda u1, u2: u1 * u2, [e1, e2])
    assert abs(val) < 1e-10


def combine_orthonormal(sp):
    from opfeyn import gram_schmidt_pair
    return gram_schmidt_pair(b_element(sp), monomial_element(sp, 1)).e2


def test_cylinder_rejects_non_orthonormal(wiener):
    w = monomial_element(wiener, 1)
    with pytest.raises(NotOrthonormal):
        cylinder_expectation(lambda u: u, [w])
    with pytest.raises(NotOrthonormal):
        cylinder_expectation(lambda u, v: u * v,
                             [b_element(wiener), b_element(wiener)])


def test_cylinder_dimension_cap(wiener):
    e = b_element(wiener)
    with pytest.raises(ValueError):
        cylinder_expectation(lambda *u: 1.0, [e, e, e, e])
