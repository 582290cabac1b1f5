import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riopt import (
    Euclidean,
    Hyperbolic,
    SPD,
    Sphere,
    correction_blowup_trace,
    fd_gradient_check,
    holonomy_probe,
    random_small_rectangle,
    triangle_comparison_suite,
)
from riopt.geometry import TangentVector
from riopt.streams import FrechetMeanLoss


# ------------------------------------------------------------- fd checking
def test_fd_frechet_loss_hyperbolic(rng):
    h = Hyperbolic(3)
    base = h.base_point()
    pts = np.stack([h.random_point(rng, center=base, radius=1.0).coords for _ in range(5)])
    loss = FrechetMeanLoss(h, pts)
    x = h.random_point(rng, center=base, radius=1.0)
    rep = fd_gradient_check(h, loss.value, loss.grad, x, n_dirs=10, h=1e-4, seed=3)
    assert rep.max_violation < 1e-5
    assert rep.samples == 10


def test_fd_linear_function_euclidean(rng):
    m = Euclidean(4)
    c = rng.standard_normal(4)
    f = lambda p: float(np.dot(c, p.coords))
    grad = lambda p: TangentVector(p, c.copy())
    rep = fd_gradient_check(m, f, grad, m.random_point(rng), n_dirs=6, seed=0)
    assert rep.max_violation < 1e-10


def test_fd_constant_function(rng):
    m = Sphere(2)
    f = lambda p: 1.5
    grad = lambda p: m.zero_tangent(p)
    rep = fd_gradient_check(m, f, grad, m.random_point(rng), n_dirs=4, seed=0)
    assert rep.max_violation == 0.0


def test_fd_requires_positive_step(rng):
    m = Euclidean(2)
    with pytest.raises(ValueError):
        fd_gradient_check(m, lambda p: 0.0, lambda p: m.zero_tangent(p), m.base_point(), h=0.0)


def test_fd_deterministic(rng):
    m = Euclidean(3)
    c = np.array([1.0, -2.0, 0.5])
    f = lambda p: float(np.dot(c, p.coords)) ** 2
    grad = lambda p: TangentVector(p, 2 * float(np.dot(c, p.coords)) * c)
    x = m.random_point(rng)
    a = fd_gradient_check(m, f, grad, x, n_dirs=5, seed=7)
    b = fd_gradient_check(m, f, grad, x, n_dirs=5, seed=7)
    assert a == b


# ----------------------------------------------------------- triangle suite
def test_triangles_flat_equality():
    rep = triangle_comparison_suite(Euclidean(3), 300, 2.0, seed=0)
    assert abs(rep.max_violation) < 1e-10


@pytest.mark.parametrize(
    "manifold,diam",
    [(Sphere(2), math.pi / 2 - 0.1), (Hyperbolic(2), 1.5), (SPD(2), 1.5)],
    ids=["sphere", "hyperbolic", "spd"],
)
def test_triangles_curved(manifold, diam):
    rep = triangle_comparison_suite(manifold, 1000, diam, seed=0)
    assert rep.max_violation <= 1e-8
    assert rep.samples == 1000


def test_triangle_suite_deterministic():
    a = triangle_comparison_suite(Hyperbolic(2), 50, 1.0, seed=4)
    b = triangle_comparison_suite(Hyperbolic(2), 50, 1.0, seed=4)
    assert a == b


# ---------------------------------------------------------------- holonomy
def test_holonomy_flat_vanishes(rng):
    m = Euclidean(3)
    corners, z = random_small_rectangle(m, rng, scale=0.4)
    defect, bound = holonomy_probe(m, corners, z)
    assert defect < 1e-12
    assert bound == 0.0


def _equator_square(s, eps):
    p = s.base_point()
    e1 = s.to_tangent(p, np.array([0.0, 1.0, 0.0]))
    e2 = s.to_tangent(p, np.array([0.0, 0.0, 1.0]))
    c0 = p
    c1 = s.exp(p, eps * e1)
    c3 = s.exp(p, eps * e2)
    c2 = s.exp(c1, eps * s.transport(p, c1, e2))
    return [c0, c1, c2, c3]


def test_holonomy_sphere_small_square_excess():
    s = Sphere(2)
    for eps in (0.05, 0.01):
        corners = _equator_square(s, eps)
        z = s.random_tangent(corners[0], np.random.default_rng(3), norm=1.0)
        defect, bound = holonomy_probe(s, corners, z)
        assert defect <= bound
        assert defect / eps**2 == pytest.approx(1.0, rel=0.02)


def test_holonomy_degenerate_rectangle():
    s = Sphere(2)
    p = s.base_point()
    q = s.exp(p, 0.3 * s.to_tangent(p, np.array([0.0, 1.0, 0.0])))
    z = s.random_tangent(p, np.random.default_rng(5), norm=1.0)
    defect, _ = holonomy_probe(s, [p, q, q, p], z)
    assert defect < 1e-10


def test_holonomy_requires_four_corners():
    s = Sphere(2)
    p = s.base_point()
    z = s.random_tangent(p, 0, norm=1.0)
    with pytest.raises(ValueError):
        holonomy_probe(s, [p, p, p], z)


# ----------------------------------------------------------- blowup trace
def test_blowup_first_values():
    trace = correction_blowup_trace(0.1, 1.0, 5)
    assert trace.values[0] == pytest.approx(0.075, abs=1e-12)
    assert trace.values[2] == pytest.approx(0.306, abs=5e-4)
    assert trace.diverged_at is None


def test_blowup_divergence_and_monotonicity():
    trace = correction_blowup_trace(0.1, 1.0, 50)
    assert np.all(np.diff(trace.values) > 0)
    assert trace.values.max() > 1e3
    assert trace.diverged_at is not None
    assert trace.diverged_at < 20  # escapes to infinity well before round 20
    assert len(trace.values) == trace.diverged_at - 1


def test_blowup_flat_case():
    trace = correction_blowup_trace(0.1, 0.0, 10)
    assert np.all(trace.values == 0.0)
    assert trace.diverged_at is None


@given(etaG=st.floats(0.01, 0.2), Km=st.floats(0.1, 2.0))
def test_blowup_strictly_increasing_once_positive(etaG, Km):
    trace = correction_blowup_trace(etaG, Km, 12)
    vals = trace.values
    assert np.all(np.diff(vals) > 0)


def test_blowup_rejects_bad_horizon():
    with pytest.raises(ValueError):
        correction_blowup_trace(0.1, 1.0, 0)


def test_probe_report_serializes():
    rep = triangle_comparison_suite(Euclidean(2), 10, 1.0, seed=0)
    d = rep.to_dict()
    assert d["samples"] == 10
    assert "max_violation" in d and "worst_case" in d
