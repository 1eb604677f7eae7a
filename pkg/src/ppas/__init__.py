"""Numerical jumping loci of twisted ideal sheaves on a principally polarized abelian surface."""
from .jump import Calibration, JumpLocus, calibrate, jump_locus, smin
from .linsys import SectionL2, TwistParam, eval_matrix, h0, line_intersection, lines_through, singular_points
from .schemes import CurvilinearTriple, Double, Reduced, Yd, Ye, ZeroScheme, conditions
from .surface import DEFAULT_TAU, PeriodMatrix, SurfaceConfig, TorusPoint, embed, torus_distance, two_torsion

__all__ = [
    "Calibration", "JumpLocus", "calibrate", "jump_locus", "smin",
    "SectionL2", "TwistParam", "eval_matrix", "h0", "line_intersection", "lines_through", "singular_points",
    "CurvilinearTriple", "Double", "Reduced", "Yd", "Ye", "ZeroScheme", "conditions",
    "DEFAULT_TAU", "PeriodMatrix", "SurfaceConfig", "TorusPoint", "embed", "torus_distance", "two_torsion",
]
