import json
import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from qcext.bounds import thm2_bound
from qcext.errors import InvalidInputError, InvalidParameterError
from qcext.extensions import PolarGrid, distortion_field, numerical_beltrami
from qcext.geometry import hyperbolic_distance
from qcext.sharp_examples import (
    EllipticGerm,
    WedgeMap,
    elliptic_germ,
    elliptic_roundness,
    g3_inverse_boundary,
    g3_inverse_linear,
    wedge_counterexample,
)
from qcext.special import grotzsch_modulus


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_normalization_and_r0_range(a):
    g = elliptic_germ(a)
    assert abs(g(1.0) - 1) < 1e-9
    assert 0 < g.r0 < a


@pytest.mark.parametrize("a", [1e-3, 0.2, 0.5, 0.8, 0.99])
def test_r0_closed_form(a):
    # D \ [-a, a] has modulus mu(a^2) / 2
    assert EllipticGerm(a).r0 == pytest.approx(math.exp(-grotzsch_modulus(a * a) / 2), rel=1e-9)


def test_r0_small_a():
    assert EllipticGerm(1e-3).r0 / 1e-3 == pytest.approx(0.5, rel=5e-2)


@pytest.mark.xfail(strict=True, reason="r0/a = 0.669 at a = 0.99; r0/a tends to 1 only as a -> 1")
def test_r0_large_a():
    assert EllipticGerm(0.99).r0 / 0.99 == pytest.approx(1.0, rel=5e-2)


def test_r0_ratio_increases_to_one():
    ratios = [EllipticGerm(a).r0 / a for a in (0.5, 0.9, 0.99, 0.9999, 0.999999)]
    assert all(x < y for x, y in zip(ratios, ratios[1:]))
    assert ratios[-1] > 0.8


@pytest.mark.parametrize("a", [0.2, 0.5])
def test_injective_and_into_annulus(a):
    g = EllipticGerm(a)
    x = np.linspace(-0.995, 0.995, 200)
    X, Y = np.meshgrid(x, x)
    z = (X + 1j * Y).ravel()
    z = z[(np.abs(z) < 0.999) & ~((np.abs(z.imag) < 1e-12) & (np.abs(z.real) <= a))]
    w = g(z)
    assert np.all(np.abs(w) > g.r0 - 1e-6) and np.all(np.abs(w) < 1 + 1e-6)
    d, _ = cKDTree(np.column_stack([w.real, w.imag])).query(np.column_stack([w.real, w.imag]), k=2)
    assert d[:, 1].min() > 0


def test_conjugation_symmetry():
    g = EllipticGerm(0.5)
    rng = np.random.default_rng(4)
    z = 0.95 * np.sqrt(rng.uniform(size=200)) * np.exp(2j * np.pi * rng.uniform(size=200))
    assert np.max(np.abs(g(np.conj(z)) - np.conj(g(z)))) < 1e-9


def test_unit_circle_preserved():
    g = EllipticGerm(0.6)
    t = np.linspace(0, 2 * np.pi, 300, endpoint=False)
    assert np.max(np.abs(np.abs(g(np.exp(1j * t))) - 1)) < 1e-12


def test_inverse_roundtrip():
    g = EllipticGerm(0.5)
    rng = np.random.default_rng(9)
    w = (g.r0 + (1 - g.r0) * rng.uniform(0.05, 0.95, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    assert np.max(np.abs(g(g.inverse(w)) - w)) < 1e-12


def test_derivative_matches_finite_difference():
    g = EllipticGerm(0.4)
    z = np.array([0.6 + 0.3j, -0.2 + 0.5j, 0.1 - 0.7j])
    h = 1e-6
    fd = (g(z + h) - g(z - h)) / (2 * h)
    assert np.allclose(g.derivative(z), fd, rtol=1e-7)


@pytest.mark.parametrize("r", [0.8, 0.95])
def test_level_curves_are_hyperbolic_ellipses(r):
    g = EllipticGerm(0.5)
    z = g.level_curve(r, 256).vertices
    s = hyperbolic_distance(-0.5, z) + hyperbolic_distance(0.5, z)
    assert np.ptp(s) < 1e-3


def test_level_curve_range_checked():
    g = EllipticGerm(0.5)
    with pytest.raises(InvalidParameterError):
        g.level_curve(g.r0 / 2)
    with pytest.raises(InvalidParameterError):
        EllipticGerm(1.0)


def test_level_curves_json():
    data = json.loads(EllipticGerm(0.5).level_curves_json([0.5, 0.9], n=64))
    assert data["a"] == 0.5 and len(data["curves"]) == 2
    assert len(data["curves"][0]["points"]) == 64


def test_elliptic_roundness_formula():
    assert elliptic_roundness(0.5) == pytest.approx(5 / 3)
    assert elliptic_roundness(0) == 1


def test_g3_inverse_boundary_vertices():
    r0 = 0.4
    assert g3_inverse_boundary(r0, 1) == pytest.approx((1 / r0 + r0) / 2)
    assert g3_inverse_boundary(r0, 1j) == pytest.approx(1j * (1 / r0 - r0) / 2)
    with pytest.raises(InvalidInputError):
        g3_inverse_boundary(r0, 0.5)


def test_g3_inverse_linear_distortion():
    r0 = 0.4
    L = g3_inverse_linear(r0)
    field = numerical_beltrami(L, PolarGrid(0.2, 0.9, 32, 64))
    assert np.max(np.abs(field.abs - r0 * r0)) < 1e-10
    K = distortion_field(field).values
    assert np.max(np.abs(K - (1 + r0**2) / (1 - r0**2))) < 1e-9
    assert L.bound == pytest.approx((1 + r0**2) / (1 - r0**2))


def test_sharpness_chain():
    for a in np.arange(0.1, 0.95, 0.1):
        r0 = EllipticGerm(a).r0
        assert (1 + r0**2) / (1 - r0**2) <= thm2_bound(1, math.log(1 / r0))


def test_wedge_boundary_trace():
    W = wedge_counterexample(0.2)
    x = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
    assert np.allclose(W.boundary(x), np.where(x < 0, x, x * x))
    assert W.h(0.0) == 0 and W.h(np.pi) == 1
    assert np.all(np.diff(W.h(np.linspace(0, np.pi, 100))) >= 0)


def test_wedge_ratio_grows_like_t():
    W = WedgeMap(0.2)
    assert W.quasisymmetry_ratio(10) == pytest.approx(10)
    assert W.quasisymmetry_ratio(1000) == pytest.approx(1000)


def test_wedge_distortion_off_wedge():
    eps = 0.2
    G = WedgeMap(eps).disk_map()
    above = numerical_beltrami(G, PolarGrid(0.2, 5.0, 32, 64, np.pi / 2 + eps + 0.05, np.pi - 0.05))
    below = numerical_beltrami(G, PolarGrid(0.2, 5.0, 32, 64, 0.05, np.pi / 2 - eps - 0.05))
    assert np.max(np.abs(distortion_field(above).values - 1)) < 1e-6
    assert np.max(np.abs(distortion_field(below).values - 2)) < 1e-6


def test_wedge_validation():
    with pytest.raises(InvalidParameterError):
        WedgeMap(0.0)
    with pytest.raises(InvalidParameterError):
        WedgeMap(2.0)
