"""Secrecy-rate regions and optimal power allocations for Gaussian
multiple-access and two-way wiretap channels, with cooperative jamming and
brute-force verification oracles."""

from .channels import (
    GAIN_MERGE_RTOL,
    TOL_ABS,
    NonStandardizableChannel,
    PowerAllocation,
    RawMacChannel,
    RawTwChannel,
    StdMacChannel,
    StdTwChannel,
    cap_eve,
    cap_eve_tilde,
    cap_main,
    channel_from_json,
    channel_to_json,
    is_degraded,
    merge_tied_users,
    phi,
    psi,
    standardize_mac,
    standardize_tw,
)
from .regions import (
    KIND_SECRECY,
    KIND_TOTAL,
    KIND_USER_SECRECY,
    KIND_USER_TOTAL,
    RateConstraint,
    RatePoint,
    SecrecyRegion,
    TdmaShares,
    convex_hull_2d,
    mac_hull_region,
    mac_sup_region,
    mac_tdma_region,
    region_contains,
    tw_region,
)
from .allocation import (
    SumRateSolution,
    mac_best_sum_rate,
    mac_sup_optimal,
    mac_tdma_optimal,
    mac_two_user_closed_form,
    sup_sum_rate,
    tdma_share_search,
    tw_optimal,
    tw_sum_rate,
)
from .jamming import (
    JammingSolution,
    cj_objective_mac,
    mac_cj_optimal,
    mac_cj_rate,
    mac_cj_two_user,
    pivot_quadratic,
    rho_eval,
    rho_terms,
    tw_cj_optimal,
    tw_cj_rate,
)
from .oracle import (
    GridSpec,
    grid_max_mac_cj,
    grid_max_mac_sup,
    grid_max_tw,
    grid_max_tw_cj,
    random_degraded_mac_instance,
    random_mac_instance,
    random_tw_instance,
)
from .sweep import (
    Scene,
    SweepResult,
    default_scene,
    gains_from_geometry,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "GAIN_MERGE_RTOL",
    "TOL_ABS",
    "NonStandardizableChannel",
    "PowerAllocation",
    "RawMacChannel",
    "RawTwChannel",
    "StdMacChannel",
    "StdTwChannel",
    "cap_eve",
    "cap_eve_tilde",
    "cap_main",
    "channel_from_json",
    "channel_to_json",
    "is_degraded",
    "merge_tied_users",
    "phi",
    "psi",
    "standardize_mac",
    "standardize_tw",
    "KIND_SECRECY",
    "KIND_TOTAL",
    "KIND_USER_SECRECY",
    "KIND_USER_TOTAL",
    "RateConstraint",
    "RatePoint",
    "SecrecyRegion",
    "TdmaShares",
    "convex_hull_2d",
    "mac_hull_region",
    "mac_sup_region",
    "mac_tdma_region",
    "region_contains",
    "tw_region",
    "SumRateSolution",
    "mac_best_sum_rate",
    "mac_sup_optimal",
    "mac_tdma_optimal",
    "mac_two_user_closed_form",
    "sup_sum_rate",
    "tdma_share_search",
    "tw_optimal",
    "tw_sum_rate",
    "JammingSolution",
    "cj_objective_mac",
    "mac_cj_optimal",
    "mac_cj_rate",
    "mac_cj_two_user",
    "pivot_quadratic",
    "rho_eval",
    "rho_terms",
    "tw_cj_optimal",
    "tw_cj_rate",
    "GridSpec",
    "grid_max_mac_cj",
    "grid_max_mac_sup",
    "grid_max_tw",
    "grid_max_tw_cj",
    "random_degraded_mac_instance",
    "random_mac_instance",
    "random_tw_instance",
    "Scene",
    "SweepResult",
    "default_scene",
    "gains_from_geometry",
    "sweep",
    "__version__",
]
