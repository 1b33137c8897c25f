"""Rigged annuli in the non-overlapping model: welding, multiplication and charts."""
from .charts import ChartPoint, big_chart, chi, chi_inverse, holo_probe, norm_1inf, pre_schwarzian
from .circle import CircleHomeo, compose_circle, identity, invert_circle, mobius_boundary, qs_quotient, rotation
from .complexfn import DiskMap, ExteriorMap, fit_series, s_involution
from .errors import AnnulusError, InputError, SolverError
from .riemann import JordanCurve, complementary_pair, exterior_map, interior_map
from .semigroup import RiggedAnnulus, classify, compose_e, from_qs, multiply, normalize, rho
from .welding import WeldingProblem, weld, weld_residual

__version__ = "0.1.0"
