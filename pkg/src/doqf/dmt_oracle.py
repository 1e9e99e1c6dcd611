"""Numerical cross-check of the analytic tradeoff via exponential-order regions.

Substituting G_ij = rho^-a_ij turns each outage event into a piecewise-linear
region of the order vector (a01, a02, a12), and the event's decay exponent is
the infimum of a01 + a02 + a12 over that region intersected with the positive
octant.  This module transcribes the four event regions directly from the
finite-SNR event definitions — independently of the closed-form exponents in
dmt — and estimates the infima by grid search, so the two routes can be
compared on equal terms.

Grid evaluation walks fixed-a01 slabs in ascending order with a running best;
the reduction order is fixed, so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dmt import d_of

# Truncation of the order space: every exponent of interest is <= 2, and all
# region constraints are monotone in each a beyond 1, so nothing below 2.5 per
# coordinate is ever cut off.  This is a verification-scope parameter, not a
# tunable of the math.
A_MAX = 2.5


@dataclass(frozen=True)
class OrderRegionSpec:
    """One outage event's order region at fixed (t0, delta, r).

    event_index selects the relay outcome: 1 decoded, 2 description combined,
    3 description lost, 4 relay silent.  delta is the distortion growth
    exponent (Delta^2 ~ rho^delta), as in the dmt module.
    """

    event_index: int
    t0: float
    delta: float
    r: float

    def __post_init__(self):
        if self.event_index not in (1, 2, 3, 4):
            raise ValueError("event_index must be one of 1, 2, 3, 4")
        if not 0.0 < self.t0 < 1.0:
            raise ValueError("t0 must lie strictly inside (0, 1)")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("multiplexing gain r must lie in [0, 1]")

    @property
    def t1(self) -> float:
        return 1.0 - self.t0


def _event_mask(spec: OrderRegionSpec, a01, a02, a12):
    """Region membership, vectorized over any mix of scalar/array orders.

    Writing pos(x) for max(x, 0), the rate of a link of order a behaves like
    pos(1 - a) log rho, so each finite-SNR inequality maps to a piecewise
    linear one in the orders.
    """
    t0, t1, delta, r = spec.t0, spec.t1, spec.delta, spec.r
    p01 = np.maximum(1.0 - np.asarray(a01, dtype=float), 0.0)
    p02 = np.maximum(1.0 - np.asarray(a02, dtype=float), 0.0)

    if spec.event_index == 1:
        # Relay decoded (t0 pos(1-a01) > r); destination combines the direct
        # slot-0 stream with the slot-1 pair whose orders add as a max.
        combined = np.maximum(1.0 - np.minimum(a02, a12), 0.0)
        return (t0 * p01 > r) & (t0 * p02 + t1 * combined < r)

    if spec.event_index == 2:
        # Decode failed, description quantized and delivered: the combined
        # slot-0 observation carries order min(a02, a01 + delta).
        combined = np.maximum(1.0 - np.minimum(a02, np.asarray(a01, dtype=float) + delta), 0.0)
        outage = t1 * p02 + t0 * combined < r
        decode_failed = p01 < r / t0
        delivery = np.maximum(1.0 + max(1.0 - r / t0, 0.0) - np.asarray(a12, dtype=float) - p02, 0.0) \
            > r / t1 - (t0 / t1) * delta
        quantizable = delta <= p01
        return outage & decode_failed & delivery & quantizable

    if spec.event_index == 3:
        # Decode failed, description lost: slot-0 direct observation only.
        outage = t0 * p02 < r
        decode_failed = p01 < r / t0
        delivery_failed = np.maximum(1.0 + max(1.0 - r / t0, 0.0) - np.asarray(a12, dtype=float) - p02, 0.0) \
            <= r / t1 - (t0 / t1) * delta
        quantizable = delta <= p01
        return outage & decode_failed & delivery_failed & quantizable

    # Event 4: relay silent (observation below the distortion floor); the
    # destination decodes from the direct link over the whole frame.
    outage = p02 < r
    decode_failed = p01 < r / t0
    not_quantizable = delta > p01
    return outage & decode_failed & not_quantizable


def in_region(spec: OrderRegionSpec, a01: float, a02: float, a12: float) -> bool:
    """Membership of a nonnegative order triple in the event's region."""
    if a01 < 0.0 or a02 < 0.0 or a12 < 0.0:
        raise ValueError("orders must be nonnegative")
    return bool(_event_mask(spec, a01, a02, a12))


def infimum_grid(spec: OrderRegionSpec, grid_step: float) -> float:
    """Grid infimum of a01 + a02 + a12 over the event region, +inf if empty.

    Searches [0, A_MAX]^3 at the given step.  Rounding each coordinate to the
    grid costs at most one step apiece, and in the lost-description region a
    rounded a02 tightens the a12 requirement by the same amount, so the
    returned value overestimates the true infimum by at most 4 * grid_step
    (3 * grid_step when no constraint couples two coordinates).  Slabs of
    fixed a01 are scanned in ascending order and the scan stops once a01
    alone exceeds the running best, which is safe because a02 + a12 >= 0.
    """
    if grid_step <= 0.0:
        raise ValueError("grid_step must be positive")
    axis = np.arange(0.0, A_MAX + grid_step / 2.0, grid_step)
    a02_plane, a12_plane = np.meshgrid(axis, axis, indexing="ij")
    plane_sum = a02_plane + a12_plane
    best = math.inf
    for a01 in axis:
        if a01 >= best:
            break
        mask = _event_mask(spec, a01, a02_plane, a12_plane)
        if mask.any():
            candidate = a01 + float(np.where(mask, plane_sum, np.inf).min())
            if candidate < best:
                best = candidate
    return best


@dataclass(frozen=True)
class SupGridResult:
    """Best exponent found over a (t0, delta) grid, with its maximizer."""

    d_best: float
    t0_best: float
    delta_best: float


def sup_grid(r: float, t0_grid, delta_grid, inner_step: float = 0.005,
             method: str = "terms") -> SupGridResult:
    """Brute-force sup over (t0, delta) of the four-event minimum exponent.

    method "terms": the minimum of the four analytic exponents (d_of) at each
        grid point — fast, used to confront the closed-form optimum with
        direct maximization of its own ingredients.
    method "regions": the minimum of the four grid infima at inner_step — the
        fully independent (and much slower) route; meant for spot checks on
        small grids.

    Ties keep the first maximizer in grid order, so results are deterministic.
    """
    if method not in ("terms", "regions"):
        raise ValueError(f"unknown method {method!r}")
    d_best = -math.inf
    t0_best = math.nan
    delta_best = math.nan
    for t0 in t0_grid:
        t0 = float(t0)
        for delta in delta_grid:
            delta = float(delta)
            if method == "terms":
                d = d_of(t0, delta, r)
            else:
                d = min(infimum_grid(OrderRegionSpec(event_index=k, t0=t0,
                                                     delta=delta, r=r), inner_step)
                        for k in (1, 2, 3, 4))
            if d > d_best:
                d_best, t0_best, delta_best = d, t0, delta
    return SupGridResult(d_best=d_best, t0_best=t0_best, delta_best=delta_best)


def verification_rows(r_values, t0_grid, delta_grid) -> list[tuple[float, float, float, float, float, float]]:
    """Rows (r, d_analytic, d_oracle, abs_error, t0_star_analytic, t0_best_oracle).

    d_oracle comes from the fast sup_grid path; this is the table behind the
    verification CSV report.
    """
    from .dmt import dmt_doqf_star

    rows = []
    for r in r_values:
        r = float(r)
        opt = dmt_doqf_star(r)
        sup = sup_grid(r, t0_grid, delta_grid)
        rows.append((r, opt.d, sup.d_best, abs(sup.d_best - opt.d),
                     opt.t0_star, sup.t0_best))
    return rows
