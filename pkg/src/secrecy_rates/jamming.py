"""Cooperative jamming: secrecy-sum-rate maximization with helpful noise.

Users either transmit, stay silent, or jam (send Gaussian noise that hurts
the eavesdropper more than the receiver).  For the MAC wiretap channel the
optimum has an ordered structure: a prefix of the gain-sorted users
transmits at cap, a gap stays silent, and a suffix jams at cap except for
at most one "pivot" jammer whose power solves a quadratic.  The solver
enumerates every (prefix, pivot) pattern and keeps the best.  The two-way
variant only ever jams at full power, decided by a five-branch rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .channels import (
    TOL_ABS,
    PowerAllocation,
    StdMacChannel,
    StdTwChannel,
    _powers_of,
    phi,
    psi,
    to_jsonable,
)
from .allocation import _require_strict_gains

# Rates closer than this count as equal when ranking candidate role
# patterns; see mac_cj_optimal.
RATE_TIE_TOL = 1e-12


@dataclass
class JammingSolution:
    """Role partition, allocation, rate, and pivot diagnostics."""

    transmit_set: Tuple[int, ...]
    jam_set: Tuple[int, ...]
    silent_set: Tuple[int, ...]
    allocation: PowerAllocation
    sum_rate: float
    pivot_user: Optional[int] = None
    quad_coeffs: Optional[Tuple[float, float, float]] = None
    pivot_power: Optional[float] = None
    diagnostics: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        return to_jsonable(
            {
                "transmit_set": [k + 1 for k in self.transmit_set],
                "jam_set": [k + 1 for k in self.jam_set],
                "silent_set": [k + 1 for k in self.silent_set],
                "powers": self.allocation.powers,
                "sum_rate_bits": self.sum_rate,
                "pivot_user": None if self.pivot_user is None else self.pivot_user + 1,
                "pivot_power": self.pivot_power,
                "quad_coeffs": self.quad_coeffs,
                "diagnostics": self.diagnostics,
            }
        )


def cj_objective_mac(ch: StdMacChannel, alloc, transmit_set: Iterable[int]) -> float:
    """Ratio phi(all users) / phi(non-transmitters); rate = half of [-log2]^+.

    Smaller is better: jamming power inflates the denominator, discounting
    the eavesdropper's gain on the jammers.
    """
    powers = _powers_of(alloc)
    t_set = set(transmit_set)
    complement = [k for k in range(ch.k_users) if k not in t_set]
    return phi(powers, ch, range(ch.k_users)) / phi(powers, ch, complement)


def mac_cj_rate(ch: StdMacChannel, alloc, transmit_set: Iterable[int]) -> float:
    """Clamped cooperative-jamming secrecy sum rate in bits."""
    ratio = cj_objective_mac(ch, alloc, transmit_set)
    return max(-0.5 * math.log2(ratio), 0.0)


def tw_cj_rate(ch: StdTwChannel, alloc, transmit_set: Iterable[int]) -> float:
    """Clamped two-way cooperative-jamming secrecy sum rate in bits."""
    powers = _powers_of(alloc)
    h = ch.eve_gains
    t_set = sorted(set(transmit_set))
    comp = [k for k in range(2) if k not in t_set]
    gross = sum(0.5 * math.log2(1.0 + float(powers[k])) for k in t_set)
    seen = float((h[t_set] * powers[t_set]).sum()) if t_set else 0.0
    cover = float((h[comp] * powers[comp]).sum()) if comp else 0.0
    leak = 0.5 * math.log2(1.0 + seen / (1.0 + cover))
    return max(gross - leak, 0.0)


def rho_terms(ch: StdMacChannel, transmit_set, jam_set, alloc, j: int) -> Tuple[float, float]:
    """The two summands of rho_j, useful for relative-scale comparisons."""
    powers = _powers_of(alloc)
    t_set = sorted(set(transmit_set))
    if j not in set(jam_set):
        raise ValueError("rho is defined for jamming users only")
    comp = [k for k in range(ch.k_users) if k not in set(t_set)]
    h = ch.eve_gains
    hj = float(h[j])
    sum_p_all = float(powers.sum())
    sum_hp_all = float((h * powers).sum())
    sum_p_comp = float(powers[comp].sum())
    sum_hp_comp = float((h[comp] * powers[comp]).sum())
    sum_p_t = float(powers[t_set].sum()) if t_set else 0.0
    sum_hp_t = float((h[t_set] * powers[t_set]).sum()) if t_set else 0.0
    term_neg = -hj * (1.0 + sum_p_all) * (1.0 + sum_p_comp) * sum_hp_t
    term_pos = (1.0 + sum_hp_all) * (1.0 + sum_hp_comp) * sum_p_t
    return term_neg, term_pos


def rho_eval(ch: StdMacChannel, transmit_set, jam_set, alloc, j: int) -> float:
    """Derivative indicator for jammer j's power: the objective ratio falls
    in P_j exactly while rho_j < 0, so an interior pivot has rho_j = 0."""
    term_neg, term_pos = rho_terms(ch, transmit_set, jam_set, alloc, j)
    return term_neg + term_pos


def _quadratic_plus_root(c1: float, c2: float, c3: float) -> Optional[float]:
    """Largest root of c1 x^2 + c2 x + c3 (the "+sqrt" branch), if positive.

    Uses the cancellation-free form when c2 > 0.  Returns None when the
    discriminant is negative or the root is not strictly positive.
    """
    disc = c2 * c2 - 4.0 * c1 * c3
    if disc < 0.0:
        return None
    s = math.sqrt(disc)
    if c2 <= 0.0:
        root = (-c2 + s) / (2.0 * c1)
    else:
        den = -c2 - s
        if den == 0.0:
            return None
        root = 2.0 * c3 / den
    return root if root > 0.0 else None


def pivot_quadratic(
    ch: StdMacChannel, transmit_set, jam_set, pivot: int, fixed_alloc
) -> Tuple[float, float, float, Optional[float]]:
    """Coefficients and candidate power for the one partial-power jammer.

    With every other power held at its fixed value, rho_pivot is an exact
    quadratic c1 P^2 + c2 P + c3 in the pivot's power.  Returns the
    coefficients and the "+sqrt" root, or None when no positive real root
    exists (then the pivot should stay at 0).  Degenerate c1 = 0 reduces to
    the linear equation; if c2 = 0 too the objective is flat in the pivot
    and power is conserved by returning None.
    """
    if pivot not in set(jam_set):
        raise ValueError("pivot must belong to jam_set")
    powers = _powers_of(fixed_alloc).copy()
    powers[pivot] = 0.0
    t_set = sorted(set(transmit_set))
    comp_mj = [k for k in range(ch.k_users) if k not in set(t_set) and k != pivot]
    h = ch.eve_gains
    hj = float(h[pivot])
    sum_p_t = float(powers[t_set].sum()) if t_set else 0.0
    sum_hp_t = float((h[t_set] * powers[t_set]).sum()) if t_set else 0.0
    sum_p_all_mj = float(powers.sum())
    sum_hp_all_mj = float((h * powers).sum())
    sum_p_comp_mj = float(powers[comp_mj].sum()) if comp_mj else 0.0
    sum_hp_comp_mj = float((h[comp_mj] * powers[comp_mj]).sum()) if comp_mj else 0.0

    c1 = hj * (hj * sum_p_t - sum_hp_t)
    c2 = hj * (2.0 + sum_hp_all_mj + sum_hp_comp_mj) * sum_p_t - hj * (
        2.0 + sum_p_all_mj + sum_p_comp_mj
    ) * sum_hp_t
    c3 = (1.0 + sum_hp_all_mj) * (1.0 + sum_hp_comp_mj) * sum_p_t - hj * (
        1.0 + sum_p_all_mj
    ) * (1.0 + sum_p_comp_mj) * sum_hp_t

    if c1 == 0.0:
        if c2 == 0.0:
            root = None
        else:
            linear = -c3 / c2
            root = linear if linear > 0.0 else None
    else:
        root = _quadratic_plus_root(c1, c2, c3)
    return c1, c2, c3, root


def _all_silent_solution(k: int, diagnostics: Dict) -> JammingSolution:
    return JammingSolution(
        (), (), tuple(range(k)), PowerAllocation.zeros(k), 0.0, None, None, None, diagnostics
    )


def _partition_solution(
    ch: StdMacChannel,
    powers: np.ndarray,
    t_count: int,
    rate: float,
    pivot_idx: Optional[int],
    coeffs: Optional[Tuple[float, float, float]],
    case: str,
) -> JammingSolution:
    k = ch.k_users
    transmit = tuple(i for i in range(t_count) if powers[i] > 0)
    jam_start = k if pivot_idx is None else pivot_idx
    jam = tuple(i for i in range(jam_start, k) if powers[i] > 0)
    silent = tuple(i for i in range(k) if i not in transmit and i not in jam)
    pivot_active = pivot_idx is not None and powers[pivot_idx] > 0
    jam_label = str(jam_start + 1) if jam else "none"
    diagnostics = {"branch": f"T={t_count},J={jam_label}", "case": case}
    if coeffs is not None:
        diagnostics["discriminant"] = coeffs[1] ** 2 - 4.0 * coeffs[0] * coeffs[2]
    return JammingSolution(
        transmit,
        jam,
        silent,
        PowerAllocation(powers),
        rate,
        pivot_idx if pivot_active else None,
        coeffs if pivot_active else None,
        float(powers[pivot_idx]) if pivot_active else None,
        diagnostics,
    )


def mac_cj_optimal(ch: StdMacChannel) -> JammingSolution:
    """Best cooperative-jamming solution over all ordered role patterns.

    Candidates: transmitters are the first t users at cap, the next block
    is silent, and users from the pivot onward jam at cap with the pivot
    itself at its quadratic root clamped to [0, cap].  Including t = 0 and
    the no-jammer pattern makes the no-jam optimum a candidate, so the
    result never loses to plain superposition.  Ties break toward fewer
    active jammers, then less total power, then scan order.
    """
    _require_strict_gains(ch)
    k = ch.k_users
    caps = ch.power_caps
    cands = []
    for t_count in range(k + 1):
        for pivot_idx in range(t_count, k + 1):
            powers = np.zeros(k)
            powers[:t_count] = caps[:t_count]
            coeffs = None
            case = "no-jam"
            if pivot_idx < k:
                powers[pivot_idx + 1 :] = caps[pivot_idx + 1 :]
                jam_users = tuple(range(pivot_idx, k))
                c1, c2, c3, root = pivot_quadratic(
                    ch, tuple(range(t_count)), jam_users, pivot_idx, powers
                )
                coeffs = (c1, c2, c3)
                if root is None:
                    pivot_power = 0.0
                    case = "pivot-zero"
                elif root >= float(caps[pivot_idx]):
                    pivot_power = float(caps[pivot_idx])
                    case = "pivot-at-cap"
                else:
                    pivot_power = root
                    case = "pivot-interior"
                powers[pivot_idx] = pivot_power
            rate = mac_cj_rate(ch, powers, range(t_count))
            n_jam = int(np.count_nonzero(powers[pivot_idx:] > 0)) if pivot_idx < k else 0
            cands.append(
                (rate, n_jam, float(powers.sum()), len(cands), powers.copy(), t_count, pivot_idx, coeffs, case)
            )
    # Candidates on an exact branch boundary are mathematically tied but
    # their rates land a few ulps apart; rates within RATE_TIE_TOL of the
    # best count as ties and resolve toward fewer jammers, then less spent
    # power, then scan order.
    best_rate = max(c[0] for c in cands)
    pool = [c for c in cands if c[0] >= best_rate - RATE_TIE_TOL]
    rate, _, _, _, powers, t_count, pivot_idx, coeffs, case = min(
        pool, key=lambda c: (c[1], c[2], c[3])
    )
    if rate <= 0.0:
        return _all_silent_solution(k, {"branch": "all-silent", "case": "no-positive-rate"})
    return _partition_solution(
        ch,
        powers,
        t_count,
        rate,
        pivot_idx if pivot_idx < k else None,
        coeffs,
        case,
    )


def mac_cj_two_user(ch: StdMacChannel) -> JammingSolution:
    """Two-user closed form for cooperative jamming.

    With h1 < 1, user 2 transmits below the superposition threshold, stays
    silent while its gain is at most 1, and jams with power
    [min(p, cap2)]^+ above that, where p solves the pivot quadratic in
    closed form.  With h1 >= 1 < h2, both users act only if jamming at
    min(p, cap2) actually buys a positive rate, else everyone is silent.
    Equal gains never jam: both transmit if the common gain is below 1.
    """
    if ch.k_users != 2:
        raise ValueError("mac_cj_two_user requires exactly 2 users")
    h1, h2 = float(ch.eve_gains[0]), float(ch.eve_gains[1])
    cap1, cap2 = float(ch.power_caps[0]), float(ch.power_caps[1])
    diagnostics: Dict = {}

    def jam_power() -> float:
        d = h1 * h2 * (h2 - 1.0) * ((h2 - 1.0) + (h2 - h1) * cap1)
        p = (h1 - 1.0) / (h2 - h1) + math.sqrt(max(d, 0.0)) / (h2 * (h2 - h1))
        diagnostics["p"] = p
        diagnostics["discriminant"] = d
        return p

    if not ch.has_strictly_ascending_gains():
        if h1 < 1.0 - TOL_ABS:
            powers = np.array([cap1, cap2])
            t_count, branch = 2, "both-transmit"
        else:
            powers = np.zeros(2)
            t_count, branch = 0, "all-silent"
        pivot = None
    elif h1 < 1.0 - TOL_ABS:
        threshold = (1.0 + h1 * cap1) / (1.0 + cap1)
        if h2 < threshold - TOL_ABS:
            powers = np.array([cap1, cap2])
            t_count, branch, pivot = 2, "both-transmit", None
        elif h2 <= 1.0 + TOL_ABS:
            powers = np.array([cap1, 0.0])
            t_count, branch, pivot = 1, "partner-silent", None
        else:
            p2 = max(min(jam_power(), cap2), 0.0)
            if p2 < TOL_ABS:
                p2 = 0.0
            powers = np.array([cap1, p2])
            t_count, branch, pivot = 1, "partner-jams", 1
    else:
        p2 = max(min(jam_power(), cap2), 0.0)
        if p2 < TOL_ABS:
            p2 = 0.0
        powers = np.array([cap1, p2])
        t_count, branch, pivot = 1, "jam-or-quit", 1

    rate = mac_cj_rate(ch, powers, range(t_count))
    diagnostics["branch"] = branch
    if rate <= RATE_TIE_TOL:
        diagnostics["case"] = "no-positive-rate"
        return _all_silent_solution(2, diagnostics)
    transmit = tuple(i for i in range(t_count) if powers[i] > 0)
    jam = (1,) if pivot == 1 and powers[1] > 0 else ()
    silent = tuple(i for i in range(2) if i not in transmit and i not in jam)
    pivot_active = pivot is not None and powers[1] > 0
    diagnostics["case"] = "closed-form"
    return JammingSolution(
        transmit,
        jam,
        silent,
        PowerAllocation(powers),
        rate,
        1 if pivot_active else None,
        None,
        float(powers[1]) if pivot_active else None,
        diagnostics,
    )


def tw_cj_optimal(ch: StdTwChannel) -> JammingSolution:
    """Five-branch cooperative-jamming rule for the two-way channel.

    With users relabeled so h1 <= h2: both transmit at caps while h2 <= 1;
    user 2 jams at cap once its gain passes 1 while user 1's does not; with
    both gains above 1 the user with the larger single-user psi value jams
    (at cap, if the other user's transmission stays useful), ties breaking
    toward user 2; otherwise all silent.  Jamming at full power is optimal
    whenever jamming at all: psi of the jam set exceeds 1 exactly when the
    jammer's gain does.
    """
    h = ch.eve_gains
    caps = ch.power_caps
    swap = float(h[0]) > float(h[1])
    order = [1, 0] if swap else [0, 1]
    h1, h2 = float(h[order[0]]), float(h[order[1]])
    c1, c2 = float(caps[order[0]]), float(caps[order[1]])

    psi1 = (1.0 + h1 * c1) / (1.0 + c1)
    psi2 = (1.0 + h2 * c2) / (1.0 + c2)
    psi_tie = abs(psi1 - psi2) <= TOL_ABS * max(psi1, psi2)
    diagnostics: Dict = {
        "psi_1": psi1 if not swap else psi2,
        "psi_2": psi2 if not swap else psi1,
        "psi_tie": bool(psi_tie),
    }

    if h2 <= 1.0 + TOL_ABS:
        local_powers = (c1, c2)
        local_transmit, local_jam = [0, 1], []
        branch_kind = "both-transmit"
    elif h1 <= 1.0 + TOL_ABS:
        local_powers = (c1, c2)
        local_transmit, local_jam = [0], [1]
        branch_kind = "jam"
    elif h1 < 1.0 + h2 * c2 - TOL_ABS and psi2 >= psi1:
        local_powers = (c1, c2)
        local_transmit, local_jam = [0], [1]
        branch_kind = "jam"
    elif h2 < 1.0 + h1 * c1 - TOL_ABS and psi1 > psi2:
        local_powers = (c1, c2)
        local_transmit, local_jam = [1], [0]
        branch_kind = "jam"
    else:
        local_powers = (0.0, 0.0)
        local_transmit, local_jam = [], []
        branch_kind = "all-silent"

    powers = np.zeros(2)
    powers[order[0]], powers[order[1]] = local_powers
    transmit = tuple(sorted(order[u] for u in local_transmit if powers[order[u]] > 0))
    jam = tuple(sorted(order[u] for u in local_jam if powers[order[u]] > 0))
    rate = tw_cj_rate(ch, powers, transmit)
    if branch_kind == "both-transmit":
        diagnostics["branch"] = "both-transmit"
    elif branch_kind == "jam":
        diagnostics["branch"] = f"jam-user-{order[local_jam[0]] + 1}"
    else:
        diagnostics["branch"] = "all-silent"
    if rate <= 0.0:
        diagnostics["branch"] = "all-silent"
        diagnostics["case"] = "no-positive-rate"
        return _all_silent_solution(2, diagnostics)
    silent = tuple(i for i in range(2) if i not in transmit and i not in jam)
    return JammingSolution(
        transmit,
        jam,
        silent,
        PowerAllocation(powers),
        rate,
        None,
        None,
        None,
        diagnostics,
    )
