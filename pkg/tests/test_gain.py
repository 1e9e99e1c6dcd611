"""Closed-form outage gains against the 2-D region-integral oracle.

The scalar function bracket(t, R) claims to equal the area of the two-slot
outage region {(u,v): (1-t) log(1+u) + t log(1+u+v) <= R}; region_integral
computes that area numerically and is the ground truth here.  Reference
values below were frozen from quadrature runs at 1e-8 resolution.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from doqf.gain import (
    ProtocolParams,
    bracket,
    region_integral,
    xi_cs_hd,
    xi_df,
    xi_doqf_convex,
)

LN2 = math.log(2.0)
R_2BITS = 2.0 * LN2

# Reference single-relay setup: relay at 2/3 of unit source-destination
# distance on the line, path-loss exponent 3 => sigma^2 = (3.375, 27, 1),
# even slot and power split (alpha0 = 0.5, alpha1 = 1.0), rate 2 bits.
C01, C02, C12 = 1.0 / 3.375, 1.0, 1.0 / 27.0
BRACKET_HALF_2BITS = 14.680709777918247
XI_REFERENCE = 18.486819720341497
XI_DF_REFERENCE = 54.42079331688283


def reference_params() -> ProtocolParams:
    return ProtocolParams(t0=0.5, alpha0=0.5, alpha1=1.0, R=R_2BITS)


def test_bracket_limit_branch_at_half():
    want = 0.5 + math.exp(2.0 * R_2BITS) * (2.0 * R_2BITS - 1.0) / 2.0
    assert bracket(0.5, R_2BITS) == pytest.approx(want, rel=1e-15)
    assert bracket(0.5, R_2BITS) == pytest.approx(BRACKET_HALF_2BITS, rel=1e-12)


def test_bracket_is_continuous_across_the_guard_band():
    # 2e-6 sits just outside the +-1e-6 switch to the limit branch
    mid = bracket(0.5, 1.0)
    assert bracket(0.5 - 2e-6, 1.0) == pytest.approx(mid, rel=1e-4)
    assert bracket(0.5 + 2e-6, 1.0) == pytest.approx(mid, rel=1e-4)


def test_bracket_broadcasts_over_arrays():
    t = np.array([0.3, 0.5, 0.7])
    out = bracket(t, R_2BITS)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(BRACKET_HALF_2BITS, rel=1e-12)
    assert float(out[0]) == pytest.approx(bracket(0.3, R_2BITS), rel=1e-15)


def test_bracket_rejects_degenerate_slot_fractions():
    with pytest.raises(ValueError):
        bracket(0.0, 1.0)
    with pytest.raises(ValueError):
        bracket(1.0, 1.0)


@pytest.mark.parametrize("t0,R", [(0.3, LN2), (0.7, R_2BITS), (0.5, 0.5 * LN2),
                                  (0.1, LN2), (0.9, 1.5 * LN2)])
def test_region_integral_confirms_bracket(t0, R):
    oracle = region_integral(t0, 1.0 - t0, R, method="quadrature", resolution=1e-9)
    assert oracle == pytest.approx(bracket(t0, R), rel=1e-7)


def test_region_integral_monte_carlo_agrees_coarsely():
    rng = np.random.default_rng(11)
    value, err = region_integral(0.4, 0.6, LN2, method="monte_carlo",
                                 resolution=5e-3, rng=rng, return_error=True)
    want = bracket(0.4, LN2)
    assert err < 0.01 * want
    assert value == pytest.approx(want, rel=0.02)


def test_region_integral_validates_inputs():
    with pytest.raises(ValueError):
        region_integral(0.3, 0.6, 1.0)  # fractions must sum to one
    with pytest.raises(ValueError):
        region_integral(0.3, 0.7, -1.0)
    with pytest.raises(ValueError):
        region_integral(0.3, 0.7, 1.0, method="simpson")
    assert region_integral(0.3, 0.7, 0.0) == 0.0


def test_xi_cs_hd_reference_value_and_decomposition():
    res = xi_cs_hd(reference_params(), C01, C02, C12)
    assert res.xi == pytest.approx(XI_REFERENCE, rel=1e-12)
    assert res.term_simo + res.term_miso == pytest.approx(res.xi, rel=1e-15)
    # the relay-listens cut dominates in this geometry
    assert res.term_simo > res.term_miso


def test_xi_df_reference_value_and_ordering():
    p = reference_params()
    assert xi_df(p, C01, C02, C12) == pytest.approx(XI_DF_REFERENCE, rel=1e-12)
    # decode-and-forward pays for staying silent on decode failure
    assert xi_df(p, C01, C02, C12) > xi_cs_hd(p, C01, C02, C12).xi


def test_budget_coordinates_match_amplitude_coordinates():
    # beta0 = alpha0 and beta1 = alpha1 * t1: the even split (0.5, 0.5)
    # in budget form is exactly the reference amplitudes (0.5, 1.0)
    even = float(xi_doqf_convex(0.5, 0.5, 0.5, C01, C02, C12, R_2BITS))
    assert even == pytest.approx(XI_REFERENCE, rel=1e-14)


def test_protocol_params_properties_and_validation():
    p = reference_params()
    assert p.t1 == 0.5
    assert p.beta0 == 0.5
    assert p.beta1 == 0.5
    assert p.budget_ok
    assert not ProtocolParams(t0=0.5, alpha0=1.0, alpha1=1.0, R=1.0).budget_ok
    with pytest.raises(ValueError):
        ProtocolParams(t0=0.0, alpha0=0.5, alpha1=1.0, R=1.0)
    with pytest.raises(ValueError):
        ProtocolParams(t0=0.5, alpha0=-0.5, alpha1=1.0, R=1.0)
    with pytest.raises(ValueError):
        ProtocolParams(t0=0.5, alpha0=0.5, alpha1=1.0, R=-1.0)


@given(t0=st.floats(0.05, 0.95), R=st.floats(0.05, 2.5))
@settings(max_examples=30, deadline=None)
def test_bracket_positive_and_increasing_in_rate(t0, R):
    lo = bracket(t0, R)
    hi = bracket(t0, R + 0.1)
    assert lo > 0.0
    assert hi > lo


@given(t0=st.floats(0.15, 0.85), R=st.floats(0.1, 2.0))
@settings(max_examples=15, deadline=None)
def test_bracket_equals_region_area_everywhere(t0, R):
    oracle = region_integral(t0, 1.0 - t0, R, resolution=1e-7)
    assert oracle == pytest.approx(bracket(t0, R), rel=1e-3)
