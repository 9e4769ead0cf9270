"""Secrecy-sum-rate maximizing power allocations.

Three maximizers live here: the superposition solver for the standardized
MAC wiretap channel (the optimum is a cap-or-zero prefix of the gain
ordering), the TDMA share optimizer (closed form when all gains are equal
and below 1, numeric otherwise), and the two-way solver (a three-branch
corner rule).  Each returns a SumRateSolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .channels import (
    GAIN_MERGE_RTOL,
    TOL_ABS,
    PowerAllocation,
    StdMacChannel,
    StdTwChannel,
    _powers_of,
    is_degraded,
    to_jsonable,
)
from .regions import TdmaShares

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SumRateSolution:
    """Optimal allocation, the users transmitting, and the rate in bits."""

    allocation: PowerAllocation
    transmit_set: Tuple[int, ...]
    sum_rate: float
    mode: str
    shares: Optional[TdmaShares] = None
    branch: Optional[str] = None

    def to_json(self) -> dict:
        return to_jsonable(
            {
                "mode": self.mode,
                "powers": self.allocation.powers,
                "shares": None if self.shares is None else self.shares.shares,
                "transmit_set": [k + 1 for k in self.transmit_set],
                "sum_rate_bits": self.sum_rate,
            }
        )


def sup_sum_rate(alloc, gains) -> float:
    """Clamped superposition secrecy sum rate at an allocation, in bits."""
    powers = _powers_of(alloc)
    h = gains.eve_gains if isinstance(gains, StdMacChannel) else np.asarray(gains, dtype=float)
    raw = 0.5 * (math.log2(1.0 + float(powers.sum())) - math.log2(1.0 + float((h * powers).sum())))
    return max(raw, 0.0)


def tw_sum_rate(alloc, gains) -> float:
    """Clamped two-way secrecy sum rate at an allocation, in bits."""
    powers = _powers_of(alloc)
    h = gains.eve_gains if isinstance(gains, StdTwChannel) else np.asarray(gains, dtype=float)
    raw = 0.5 * (
        math.log2(1.0 + float(powers[0]))
        + math.log2(1.0 + float(powers[1]))
        - math.log2(1.0 + float((h * powers).sum()))
    )
    return max(raw, 0.0)


def _require_strict_gains(ch: StdMacChannel) -> None:
    if not ch.has_strictly_ascending_gains():
        raise ValueError(
            "gains must be strictly ascending; merge tied users first "
            "(standardize_mac / merge_tied_users do this)"
        )


def _zero_solution(k: int, mode: str, branch: str, shares=None) -> SumRateSolution:
    return SumRateSolution(PowerAllocation.zeros(k), (), 0.0, mode, shares, branch)


def mac_sup_optimal(ch: StdMacChannel) -> SumRateSolution:
    """Optimal superposition allocation: the largest useful gain prefix at caps.

    Scanning users in ascending gain order, user l joins the transmit set
    while its gain stays below the running advantage ratio
    phi(prefix before l); by the mediant inequality this is equivalent to
    comparing against phi(prefix including l), and the condition can only
    fail once, so the scan stops at the first failure.  Boundary cases
    (gain within 1e-12 of the ratio) leave the user silent, which costs no
    rate and conserves power.
    """
    _require_strict_gains(ch)
    h = ch.eve_gains
    caps = ch.power_caps
    k = ch.k_users
    sum_p = 0.0
    sum_hp = 0.0
    prefix = 0
    for l in range(k):
        ratio = (1.0 + sum_hp) / (1.0 + sum_p)
        if h[l] < ratio - TOL_ABS:
            prefix = l + 1
            sum_p += float(caps[l])
            sum_hp += float(h[l] * caps[l])
        else:
            break
    powers = np.zeros(k)
    powers[:prefix] = caps[:prefix]
    rate = sup_sum_rate(powers, h)
    if rate <= 0.0:
        return _zero_solution(k, "SUP", f"T={prefix}")
    transmit = tuple(i for i in range(prefix) if powers[i] > 0)
    return SumRateSolution(PowerAllocation(powers), transmit, rate, "SUP", None, f"T={prefix}")


def mac_two_user_closed_form(ch: StdMacChannel) -> SumRateSolution:
    """Two-user corner rule for the superposition optimum.

    Branches: both at caps when h1 < 1 and h2 < (1+h1*c1)/(1+c1); user 1
    alone at cap when h1 < 1 and h2 at or above that threshold; otherwise
    nobody transmits.  Equal gains need no special case: the threshold then
    collapses to h < 1.  Comparisons are strict with tolerance 1e-12 and
    match mac_sup_optimal bit for bit.
    """
    if ch.k_users != 2:
        raise ValueError("mac_two_user_closed_form requires exactly 2 users")
    h1, h2 = float(ch.eve_gains[0]), float(ch.eve_gains[1])
    c1, c2 = float(ch.power_caps[0]), float(ch.power_caps[1])
    threshold = (1.0 + h1 * c1) / (1.0 + c1)
    if h1 < 1.0 - TOL_ABS and h2 < threshold - TOL_ABS:
        powers = np.array([c1, c2])
        branch = "both-transmit"
    elif h1 < 1.0 - TOL_ABS:
        powers = np.array([c1, 0.0])
        branch = "single-user"
    else:
        powers = np.zeros(2)
        branch = "all-silent"
    rate = sup_sum_rate(powers, ch.eve_gains)
    if rate <= 0.0:
        return _zero_solution(2, "SUP", branch)
    transmit = tuple(i for i in range(2) if powers[i] > 0)
    return SumRateSolution(PowerAllocation(powers), transmit, rate, "SUP", None, branch)


def _tdma_user_rate(h: float, cap: float, share: float) -> float:
    if share <= 0.0 or cap <= 0.0:
        return 0.0
    burst = cap / share
    raw = 0.5 * share * (math.log2(1.0 + burst) - math.log2(1.0 + h * burst))
    return max(raw, 0.0)


def _tdma_rate(h: np.ndarray, caps: np.ndarray, shares: np.ndarray) -> float:
    return sum(
        _tdma_user_rate(float(h[k]), float(caps[k]), float(shares[k])) for k in range(len(h))
    )


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12):
    """Golden-section maximization of a unimodal function on [lo, hi]."""
    a, b = float(lo), float(hi)
    if b - a <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


def _tdma_starts(eligible: List[int], caps: np.ndarray, k: int, restarts: int) -> List[np.ndarray]:
    starts: List[np.ndarray] = []
    for u in eligible:
        s = np.zeros(k)
        s[u] = 1.0
        starts.append(s)
    centroid = np.zeros(k)
    centroid[eligible] = 1.0 / len(eligible)
    starts.append(centroid)
    cap_sum = float(caps[eligible].sum())
    if cap_sum > 0:
        prop = np.zeros(k)
        prop[eligible] = caps[eligible] / cap_sum
        starts.append(prop)
    i = 0
    while len(starts) < restarts and i < len(eligible):
        s = np.zeros(k)
        s[eligible] = 1.0 / (2.0 * len(eligible))
        s[eligible[i]] += 0.5
        starts.append(s)
        i += 1
    return starts[:restarts]


def tdma_share_search(ch: StdMacChannel, restarts: int = 8):
    """Numeric TDMA share optimization on the simplex.

    Users with gain at or above 1 (or zero cap) get share 0.  The rest are
    optimized by coordinate sweeps over share pairs with golden-section
    line searches, stopping when a full sweep improves the rate by less
    than 1e-10, restarted from simplex corners, the centroid, and a
    cap-proportional point.  With at most three active users an exact
    nested golden-section pass then tightens the result (the objective is
    concave there, built from perspectives of concave functions).

    Returns:
        (shares, rate): the share vector over all users and the rate in bits.
    """
    h = ch.eve_gains
    caps = ch.power_caps
    k = ch.k_users
    eligible = [u for u in range(k) if h[u] < 1.0 and caps[u] > 0]
    if not eligible:
        return np.full(k, 1.0 / k), 0.0
    if len(eligible) == 1:
        shares = np.zeros(k)
        shares[eligible[0]] = 1.0
        return shares, _tdma_rate(h, caps, shares)

    def rate_of(shares: np.ndarray) -> float:
        return _tdma_rate(h, caps, shares)

    best_shares = None
    best_rate = -1.0
    pairs = [(eligible[i], eligible[j]) for i in range(len(eligible)) for j in range(i + 1, len(eligible))]
    for start in _tdma_starts(eligible, caps, k, restarts):
        shares = start.copy()
        current = rate_of(shares)
        for _ in range(300):
            sweep_base = current
            for i, j in pairs:
                budget = shares[i] + shares[j]
                if budget <= 0:
                    continue
                others = current - _tdma_user_rate(h[i], caps[i], shares[i]) - _tdma_user_rate(
                    h[j], caps[j], shares[j]
                )

                def line(t: float) -> float:
                    return (
                        others
                        + _tdma_user_rate(h[i], caps[i], t)
                        + _tdma_user_rate(h[j], caps[j], budget - t)
                    )

                t_star, val = _golden_max(line, 0.0, budget)
                if val > current:
                    shares[i] = t_star
                    shares[j] = budget - t_star
                    current = val
            if current - sweep_base < 1e-10:
                break
        if current > best_rate:
            best_rate = current
            best_shares = shares

    if len(eligible) in (2, 3):
        refined, refined_rate = _tdma_nested_exact(h, caps, eligible, k)
        if refined_rate > best_rate:
            best_rate = refined_rate
            best_shares = refined
    return best_shares, best_rate


def _tdma_nested_exact(h: np.ndarray, caps: np.ndarray, eligible: List[int], k: int):
    """Exact nested golden-section maximization for 2 or 3 active users."""
    a = eligible[0]
    b = eligible[1]

    if len(eligible) == 2:

        def outer(t: float) -> float:
            return _tdma_user_rate(h[a], caps[a], t) + _tdma_user_rate(h[b], caps[b], 1.0 - t)

        t_star, rate = _golden_max(outer, 0.0, 1.0)
        shares = np.zeros(k)
        shares[a], shares[b] = t_star, 1.0 - t_star
        return shares, rate

    c = eligible[2]

    def inner(t_a: float):
        rest = 1.0 - t_a

        def g(t_b: float) -> float:
            return _tdma_user_rate(h[b], caps[b], t_b) + _tdma_user_rate(h[c], caps[c], rest - t_b)

        return _golden_max(g, 0.0, rest)

    def outer(t_a: float) -> float:
        return _tdma_user_rate(h[a], caps[a], t_a) + inner(t_a)[1]

    t_a, _ = _golden_max(outer, 0.0, 1.0)
    t_b, _ = inner(t_a)
    shares = np.zeros(k)
    shares[a] = t_a
    shares[b] = t_b
    shares[c] = max(1.0 - t_a - t_b, 0.0)
    return shares, _tdma_rate(h, caps, shares)


def mac_tdma_optimal(ch: StdMacChannel) -> SumRateSolution:
    """Best TDMA solution: closed-form shares when degraded, numeric otherwise.

    When all gains are equal and below 1 the optimal share is exactly the
    user's fraction of the total cap.  The reported allocation gives cap
    power to every user with a positive share (each bursts at cap during
    its slot); with no useful user the shares are reported uniform and the
    rate is 0.
    """
    h = ch.eve_gains
    caps = ch.power_caps
    k = ch.k_users
    cap_sum = float(caps.sum())
    if is_degraded(ch) and cap_sum > 0:
        shares = caps / cap_sum
        rate = _tdma_rate(h, caps, shares)
        branch = "degraded-closed-form"
    else:
        shares, rate = tdma_share_search(ch)
        branch = "numeric"
    if rate <= 0.0:
        return _zero_solution(k, "TDMA", branch, TdmaShares(np.full(k, 1.0 / k)))
    powers = np.where(shares > 0, caps, 0.0)
    transmit = tuple(i for i in range(k) if powers[i] > 0)
    return SumRateSolution(
        PowerAllocation(powers), transmit, rate, "TDMA", TdmaShares(shares), branch
    )


def mac_best_sum_rate(ch: StdMacChannel) -> SumRateSolution:
    """Better of the superposition and TDMA optima; ties go to superposition."""
    sup = mac_sup_optimal(ch)
    tdma = mac_tdma_optimal(ch)
    return tdma if tdma.sum_rate > sup.sum_rate else sup


def tw_optimal(ch: StdTwChannel) -> SumRateSolution:
    """Two-way corner rule.

    With users relabeled so h1 <= h2: user 1 alone at cap when h1 < 1 and
    h2 reaches 1 + h1*c1 (the partner's transmission hurts more than it
    carries); both at caps when h1 <= 1 + h2*c2 and h2 < 1 + h1*c1;
    otherwise nobody transmits.  A clamped-to-zero rate is normalized to
    the all-zero allocation.
    """
    h = ch.eve_gains
    caps = ch.power_caps
    swap = h[0] > h[1]
    order = [1, 0] if swap else [0, 1]
    h1, h2 = float(h[order[0]]), float(h[order[1]])
    c1, c2 = float(caps[order[0]]), float(caps[order[1]])
    if h1 < 1.0 - TOL_ABS and h2 >= 1.0 + h1 * c1 - TOL_ABS:
        local = np.array([c1, 0.0])
        branch = "single-user"
    elif h1 < 1.0 + h2 * c2 + TOL_ABS and h2 < 1.0 + h1 * c1 - TOL_ABS:
        local = np.array([c1, c2])
        branch = "both-transmit"
    else:
        local = np.zeros(2)
        branch = "all-silent"
    powers = np.empty(2)
    powers[order[0]] = local[0]
    powers[order[1]] = local[1]
    rate = tw_sum_rate(powers, h)
    if rate <= 0.0:
        return _zero_solution(2, "TW", branch)
    transmit = tuple(i for i in range(2) if powers[i] > 0)
    return SumRateSolution(PowerAllocation(powers), transmit, rate, "TW", None, branch)
