import xml.etree.ElementTree as ET

import numpy as np

from qcext.geometry import JordanCurve
from qcext.svg import curve_svg, curves_svg, heatmap_svg


def test_heatmap_downsampled_and_small():
    radii = np.linspace(0.05, 0.95, 512)
    thetas = 2 * np.pi * np.arange(512) / 512
    values = 1 + np.outer(radii, np.cos(thetas)) ** 2
    text = heatmap_svg(radii, thetas, values, "K")
    assert len(text.encode()) < 2 * 1024 * 1024
    root = ET.fromstring(text)
    polys = [e for e in root.iter() if e.tag.endswith("polygon")]
    assert len(polys) <= 48 * 96


def test_curve_svgs_are_xml():
    c = JordanCurve.circle(0.2, 0.3)
    ET.fromstring(curve_svg(c, 0.2 + 0j, 0.29, 0.31, "a < b & c"))
    ET.fromstring(curves_svg([c, JordanCurve.circle(0, 0.5)]))
