"""Quasiconformal extensions of circle maps: geometry, special functions,
extension operators, ring moduli, roundness and distortion bounds."""

from .bounds import (
    FORMULAS,
    evaluate,
    glue_extension,
    lemma4_roundness_bound,
    lemma56_bound,
    mainthm_bound,
    measured_distortion,
    power_patch,
    riemann_surface_bound,
    sepinmod_bound,
    sharpness_lower,
    spacefilling_bound,
    thm2_bound,
    thm5_bound,
    thmLf_bound,
)
from .errors import InvalidParameterError, NumericalError, QCError
from .extensions import (
    BeltramiField,
    CircleMap,
    DiskMap,
    PolarGrid,
    compose,
    distortion_field,
    exact_beltrami,
    numerical_beltrami,
    power_extend,
    power_map,
    radial_extend,
    small_distortion,
)
from .geometry import (
    Annulus,
    JordanCurve,
    hyperbolic_distance,
    mobius_disk,
    pseudo_hyperbolic,
    smallest_enclosing_hyperbolic_disk,
    winding_number,
)
from .modulus import (
    ModulusEstimate,
    RingDomain,
    charge_modulus,
    q_separation_check,
    quasi_modulus_bounds,
    ring_modulus,
)
from .roundness import Germ, RoundnessReport, germ_roundness, germ_roundness_conformal, roundness
from .sharp_examples import EllipticGerm, WedgeMap, elliptic_germ, elliptic_roundness, wedge_counterexample
from .special import (
    agm,
    beta0,
    complete_elliptic_E,
    complete_elliptic_K,
    grotzsch_modulus,
    jacobi_arcsn,
    sn_cn_dn,
    teichmuller_modulus,
)

__version__ = "0.1.0"
