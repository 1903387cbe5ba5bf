from .cubes import DyadicCube, Frame, long_distance
from .domains import (Domain, SdfDomain, box, disc, domain_from_name, interval,
                      l_shape, slit_square, square)
from .whitney import WhitneyCovering, build_whitney
from .chains import (Chain, CorkscrewReport, Shadow, UniformityReport,
                     check_corkscrew, check_uniformity, estimate_rho_eps,
                     find_chain, sample_cube_pairs, shadow_of,
                     shadow_sum_constants)

__all__ = [
    "Chain", "CorkscrewReport", "Domain", "DyadicCube", "Frame", "SdfDomain",
    "Shadow", "UniformityReport", "WhitneyCovering", "box", "build_whitney",
    "check_corkscrew", "check_uniformity", "disc", "domain_from_name",
    "estimate_rho_eps", "find_chain", "interval", "l_shape", "long_distance",
    "sample_cube_pairs", "shadow_of", "shadow_sum_constants", "slit_square",
    "square",
]
