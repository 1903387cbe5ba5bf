from .normspec import NormSpec
from .averages import BallDiffAverages, backend_name, ball_diff_averages
from .norms import (difference_profile, holder_norm, holder_seminorm, lp_norm,
                    n_levels, resample_through_map, sup_norm, tl_norm,
                    tl_norm_split, tl_seminorm, tl_seminorm_from_profile,
                    wkp_norm)

__all__ = [
    "BallDiffAverages", "NormSpec", "backend_name", "ball_diff_averages",
    "difference_profile", "holder_norm", "holder_seminorm", "lp_norm",
    "n_levels", "resample_through_map", "sup_norm", "tl_norm",
    "tl_norm_split", "tl_seminorm", "tl_seminorm_from_profile", "wkp_norm",
]
