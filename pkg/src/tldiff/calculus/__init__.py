from .multiindex import MultiIndex, m_vector, multiindices, multiindices_upto, unit
from .faa import FaaTerm, eval_chain_derivative, faa_terms
from .jets import Jet, polyval_jet
from .inverse import (InverseTerm, evaluate_expansion,
                      inverse_derivative_expansion, inverse_derivative_table,
                      invert_series_1d)
from .fd import delta_h, finite_diff, partial_derivative
from .maps import (MapFamily, identity_map, linear_map, map_from_spec,
                   perturbation_map, power_map_1d, shear_map)

__all__ = [
    "FaaTerm", "InverseTerm", "Jet", "MapFamily", "MultiIndex", "delta_h",
    "eval_chain_derivative", "evaluate_expansion", "faa_terms", "finite_diff",
    "identity_map", "inverse_derivative_expansion", "inverse_derivative_table",
    "invert_series_1d", "linear_map", "m_vector", "map_from_spec",
    "multiindices", "multiindices_upto", "partial_derivative",
    "perturbation_map", "polyval_jet", "power_map_1d", "shear_map", "unit",
]
