import math

import numpy as np
import pytest

from qcext.errors import InvalidInputError, InvalidParameterError, ResolutionError, TopologyError
from qcext.extensions import power_map
from qcext.geometry import JordanCurve
from qcext.modulus import (
    CircleBoundary,
    PolygonBoundary,
    RingDomain,
    SlitBoundary,
    charge_modulus,
    curve_modulus_estimate,
    q_separation_check,
    quasi_modulus_bounds,
    read_pgm,
    ring_modulus,
    write_pgm,
)
from qcext.special import grotzsch_modulus


def concentric_modulus(c, t):
    """Closed-form modulus of D \\ closure D(c, t) for real c, via the centering Moebius map."""
    x1, x2 = c - t, c + t
    S, P = x1 + x2, x1 * x2
    a = ((1 + P) - math.sqrt((1 + P) ** 2 - S * S)) / S if S else 0.0
    rho = abs((x2 - a) / (1 - a * x2))
    return math.log(1 / rho)


def test_concentric_oracle_self_check():
    assert concentric_modulus(0.0, 0.3) == pytest.approx(math.log(1 / 0.3))


@pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
def test_annulus_calibration_coarse(r):
    est = ring_modulus(RingDomain.annulus(r), grid_n=128)
    assert est.value == pytest.approx(math.log(1 / r), rel=5e-3)
    assert est.richardson_refined and est.method == "fd"


def test_annulus_half_at_512():
    est = ring_modulus(RingDomain.annulus(0.5), grid_n=512)
    assert est.value == pytest.approx(math.log(2), rel=1e-2)


def test_richardson_improves():
    est = ring_modulus(RingDomain.annulus(0.5), grid_n=128)
    exact = math.log(2)
    assert abs(est.value - exact) < abs(est.coarse - exact)


def test_grotzsch_ring():
    est = ring_modulus(RingDomain.grotzsch(0.3), grid_n=256)
    assert est.value == pytest.approx(grotzsch_modulus(0.3), rel=2e-2)


def test_disk_minus_offcenter_disk():
    est = ring_modulus(RingDomain.disk_minus_disk(0.3, 0.2), grid_n=256)
    assert est.value == pytest.approx(concentric_modulus(0.3, 0.2), rel=2e-3)


def test_polygon_boundary_matches_circle():
    curve = JordanCurve.circle(0.3, 0.2, 1024)
    est = ring_modulus(RingDomain.from_curve(curve), grid_n=256)
    assert est.value == pytest.approx(concentric_modulus(0.3, 0.2), rel=2e-3)


def test_charge_method():
    curve = JordanCurve.circle(0.3, 0.2, 512)
    est = charge_modulus(curve)
    assert est.method == "charge"
    assert est.value == pytest.approx(concentric_modulus(0.3, 0.2), rel=1e-9)
    # the bound is conservative: it measures the potential on the chords
    assert abs(est.value - concentric_modulus(0.3, 0.2)) <= est.error < 1e-3 * est.value


def test_curve_modulus_estimate_prefers_charges():
    est = curve_modulus_estimate(JordanCurve.circle(0, 0.4))
    assert est.method == "charge"
    assert est.value == pytest.approx(math.log(2.5), rel=1e-10)


def test_monotone_under_inclusion():
    small_hole = ring_modulus(RingDomain.annulus(0.3), grid_n=128).value
    big_hole = ring_modulus(RingDomain.annulus(0.4), grid_n=128).value
    assert small_hole >= big_hole * (1 - 5e-3)
    sq = 0.3 * np.exp(1j * np.pi / 4) * np.array([1, 1j, -1, -1j])
    big = ring_modulus(RingDomain(PolygonBoundary(sq)), grid_n=128).value
    inner_sq = ring_modulus(RingDomain(PolygonBoundary(0.8 * sq)), grid_n=128).value
    assert inner_sq >= big * (1 - 5e-3)


def test_rotation_and_reflection_invariance():
    base = 0.25 * np.exp(2j * np.pi * np.arange(3) / 3) + 0.1
    m0 = ring_modulus(RingDomain(PolygonBoundary(base)), grid_n=128).value
    rot = ring_modulus(RingDomain(PolygonBoundary(base * 1j)), grid_n=128).value
    ref = ring_modulus(RingDomain(PolygonBoundary(np.conj(base)[::-1])), grid_n=128).value
    assert abs(rot / m0 - 1) < 2e-3
    assert abs(ref / m0 - 1) < 2e-3


def test_mask_domain_and_pgm_roundtrip(tmp_path):
    dom = RingDomain.annulus(0.5)
    mask = dom.mask_at(128)
    path = tmp_path / "ring.pgm"
    write_pgm(path, mask)
    back = read_pgm(path)
    assert np.array_equal(back, mask)
    g = dom.grid(128)
    side = g.h * (g.n - 1)
    extent = (g.x0, g.x0 + side, g.y0, g.y0 + side)
    est = ring_modulus(RingDomain(mask=back, extent=extent), grid_n=128, refine=False)
    assert est.value == pytest.approx(math.log(2), rel=3e-2)


def test_topology_and_resolution_errors():
    with pytest.raises(TopologyError):
        RingDomain(CircleBoundary(0.5, 0.6))
    with pytest.raises(InvalidParameterError):
        RingDomain.annulus(0.6, 0.5)
    with pytest.raises(ResolutionError):
        ring_modulus(RingDomain.annulus(0.995), grid_n=64)
    with pytest.raises(TopologyError):
        RingDomain(SlitBoundary(0, 0.5), SlitBoundary(-0.2, 0.2))


def test_quasi_bounds_examples():
    assert quasi_modulus_bounds(1.0, 0.0) == (1.0, 1.0)
    lo, hi = quasi_modulus_bounds(1.0, 1 / 3)
    assert lo == pytest.approx(0.5) and hi == pytest.approx(2.0)
    with pytest.raises(InvalidParameterError):
        quasi_modulus_bounds(1.0, 1.0)


def test_power_map_image_in_bounds():
    F = power_map(2)
    z = 0.5 * np.exp(2j * np.pi * np.arange(4096) / 4096)
    est = ring_modulus(RingDomain(PolygonBoundary(F(z))), grid_n=256)
    lo, hi = quasi_modulus_bounds(math.log(2), 1 / 3)
    assert est.value == pytest.approx(2 * math.log(2), rel=1e-3)
    assert lo <= est.value <= hi + est.error + 1e-6


def test_separation_single_component():
    ok, rep = q_separation_check([[0j]], [RingDomain.annulus(0.3, 0.9)], math.log(3), grid_n=128)
    assert ok, rep
    assert rep["moduli"][0] == pytest.approx(math.log(3), rel=5e-3)


def test_separation_overlap_detected():
    ok, rep = q_separation_check(
        [[0j]], [RingDomain.annulus(0.3, 0.9), RingDomain.annulus(0.5, 0.95)], 0.5, grid_n=64
    )
    assert not ok
    assert any(v["kind"] == "overlap" for v in rep["violations"])


def test_separation_modulus_too_small():
    ok, rep = q_separation_check([[0j]], [RingDomain.annulus(0.8, 0.9)], 1.0, grid_n=64)
    assert not ok and rep["violations"][0]["kind"] == "modulus"


def test_separation_dyadic_family():
    # disjoint annuli of equal modulus Q whose centers accumulate on the circle
    Q = math.log(2)
    annuli, comps = [], []
    for j in range(1, 6):
        c = (1 - 2.0**-j) * np.exp(1j * j)
        t = 0.4 * 2.0**-j
        annuli.append(RingDomain.annulus(t * math.exp(-Q), t, c))
        comps.append([c])
    ok, rep = q_separation_check(comps, annuli, Q, grid_n=128)
    assert ok, rep


def test_separation_needs_rings():
    with pytest.raises(InvalidInputError):
        q_separation_check([[0j]], [], 1.0)


def test_estimate_json():
    est = ring_modulus(RingDomain.annulus(0.5), grid_n=64, refine=False)
    d = est.to_dict()
    assert set(d) >= {"value", "grid_n", "richardson_refined", "error"}
    assert not d["richardson_refined"]
