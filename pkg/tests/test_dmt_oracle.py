"""Order-region grid oracle vs the analytic DMT terms.

The oracle works on the channel-order scale (a_ij = -log G_ij / log rho):
each outcome of the protocol is a region of order triples, and its decay
exponent is the infimum of a01 + a02 + a12 over that region.  Everything here
is brute force on purpose — membership tests plus grid minima — so it shares
no algebra with the closed forms it checks.
"""

import math

import numpy as np
import pytest

from doqf.dmt import d1, d2, d3, d4, dmt_doqf_star
from doqf.dmt_oracle import (
    A_MAX,
    OrderRegionSpec,
    in_region,
    infimum_grid,
    sup_grid,
    verification_rows,
)


def spec(event: int, t0: float, delta: float, r: float) -> OrderRegionSpec:
    return OrderRegionSpec(event_index=event, t0=t0, delta=delta, r=r)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(5, 0.5, 0.0, 0.3)
    with pytest.raises(ValueError):
        spec(1, 1.0, 0.0, 0.3)
    with pytest.raises(ValueError):
        spec(1, 0.5, 0.0, 1.5)
    assert spec(2, 0.4, 0.1, 0.3).t1 == pytest.approx(0.6)


def test_membership_hand_cases():
    s2 = spec(2, 0.5, 0.1, 0.3)
    # direct link already carries the rate: the two-slot sum constraint fails
    assert in_region(s2, 0.0, 0.701, 2.4) is False
    # a01 > 1 makes (1 - a01)+ = 0 < delta: the quantize condition fails
    assert in_region(s2, 1.2, 0.9, 0.1) is False
    with pytest.raises(ValueError):
        in_region(s2, -0.1, 0.5, 0.5)


def test_all_regions_empty_at_zero_multiplexing():
    # r = 0 is always served: no order triple can produce an outage exponent
    axis = np.arange(0.0, A_MAX, 0.25)
    for event in (1, 2, 3, 4):
        s = spec(event, 0.5, 0.1, 0.0)
        hits = any(in_region(s, a, b, c) for a in axis for b in axis for c in axis)
        assert not hits
        assert math.isinf(infimum_grid(s, 0.25))


def test_grid_infimum_hand_values():
    # lost-description region at the even split: infimum 1.5, attained on the
    # grid three steps high (one per rounded coordinate)
    v = infimum_grid(spec(3, 0.5, 0.0, 0.25), 0.005)
    assert v == pytest.approx(1.5, abs=3 * 0.005 + 1e-12)
    assert v >= 1.5 - 1e-12  # the grid only overestimates
    assert infimum_grid(spec(1, 0.5, 0.0, 0.3), 0.005) == pytest.approx(1.4, abs=0.015)
    assert infimum_grid(spec(1, 0.6, 0.0, 0.3), 0.005) == pytest.approx(1.25, abs=0.015)
    assert infimum_grid(spec(2, 0.5663, 0.0917, 0.3), 0.005) == \
        pytest.approx(1.3083, abs=0.015)
    assert infimum_grid(spec(4, 0.5, 0.3, 0.3), 0.005) == pytest.approx(1.4, abs=0.015)


def test_decoded_region_is_empty_when_rate_exceeds_the_listening_slot():
    # the relay cannot decode r >= t0 at any order: super-polynomial decay
    assert math.isinf(infimum_grid(spec(1, 0.4, 0.0, 0.5), 0.005))


@pytest.mark.parametrize("event,t0,delta,r,analytic", [
    (1, 0.55, 0.00, 0.30, d1(0.55, 0.30)),
    (2, 0.60, 0.15, 0.30, d2(0.60, 0.15, 0.30)),
    (3, 0.55, 0.20, 0.35, d3(0.55, 0.20, 0.35)),
    (4, 0.65, 0.25, 0.40, d4(0.65, 0.25, 0.40)),
])
def test_grid_infimum_tracks_the_analytic_exponent(event, t0, delta, r, analytic):
    """Grid value within its stated error budget of the closed form.

    Each rounded coordinate costs one step, and in the lost-description
    region the a02 rounding tightens the a12 constraint by the same amount,
    so the honest bound is 4 steps, not 3.
    """
    v = infimum_grid(spec(event, t0, delta, r), 0.01)
    assert v >= analytic - 1e-9
    assert v - analytic <= 4 * 0.01 + 1e-9


def test_low_t0_combined_description_piece_diverges_as_documented():
    """For t0 < 1/2 the stated combined-description exponent undershoots the
    region infimum (its two (1-r/t0)+ pieces cancel); kept verbatim because
    the optimized curve never enters t0 < 1/2.  This pins the divergence so a
    silent "fix" would be noticed."""
    analytic = d2(0.4566, 0.2506, 0.1428)
    grid = infimum_grid(spec(2, 0.4566, 0.2506, 0.1428), 0.01)
    assert grid > analytic + 0.5


def test_grid_infimum_monotone_in_distortion_exponent():
    # a finer distortion (larger delta) raises the lost-description exponent
    # and lowers the combined-description one: delivery failures get more
    # likely, successful combining gets rarer.
    lost = [infimum_grid(spec(3, 0.55, dd, 0.3), 0.01) for dd in (0.05, 0.15, 0.25, 0.35)]
    assert all(b >= a - 1e-9 for a, b in zip(lost, lost[1:]))
    combined = [infimum_grid(spec(2, 0.55, dd, 0.3), 0.01) for dd in (0.05, 0.15, 0.25, 0.35)]
    assert all(b <= a + 1e-9 for a, b in zip(combined, combined[1:]))


def test_sup_grid_finds_the_analytic_optimum():
    t0_grid = np.arange(0.3, 0.9001, 0.005)
    delta_grid = np.arange(0.0, 0.8001, 0.005)
    for r, want in ((0.2, 1.6), (0.3, dmt_doqf_star(0.3).d), (0.5, 0.75)):
        res = sup_grid(r, t0_grid, delta_grid)
        assert res.d_best == pytest.approx(want, abs=0.02)
        assert t0_grid[0] <= res.t0_best <= t0_grid[-1]
        assert delta_grid[0] <= res.delta_best <= delta_grid[-1]


def test_sup_grid_region_method_agrees_at_spot_points():
    # the slow path (grid infima of the four regions) at a pinned (t0, delta)
    res = sup_grid(0.3, [0.565], [0.0915], inner_step=0.01, method="regions")
    assert res.d_best == pytest.approx(dmt_doqf_star(0.3).d, abs=0.04)
    res2 = sup_grid(0.5, [2.0 / 3.0], [0.76], inner_step=0.01, method="regions")
    assert res2.d_best == pytest.approx(0.75, abs=0.04)
    with pytest.raises(ValueError):
        sup_grid(0.3, [0.5], [0.0], method="exhaustive")


def test_verification_rows_shape_and_content():
    t0_grid = np.arange(0.3, 0.9001, 0.01)
    delta_grid = np.arange(0.0, 0.8001, 0.01)
    rows = verification_rows([0.1, 0.3], t0_grid, delta_grid)
    assert len(rows) == 2
    for r, d_analytic, d_oracle, abs_err, t0_star, t0_best in rows:
        assert d_analytic == pytest.approx(dmt_doqf_star(r).d, rel=1e-12)
        assert abs_err == pytest.approx(abs(d_oracle - d_analytic), abs=1e-15)
        assert abs_err <= 0.03
        assert 0.0 < t0_star <= 1.0 and 0.0 < t0_best < 1.0
