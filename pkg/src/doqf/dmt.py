"""Analytic diversity-multiplexing tradeoffs of the half-duplex relay protocols.

At multiplexing gain r (rate growing as r log rho) the outage probability
decays as rho^-d.  Each of the four relay outcomes — decoded, description
combined, description lost, relay silent — contributes its own decay exponent
d1..d4, and the protocol's tradeoff for a fixed slot split t0 and distortion
exponent delta is their minimum.  Optimizing that minimum over (t0, delta)
gives a four-branch closed form built around the golden-ratio split
2/(sqrt5 + 1) and the root of a cubic; decode-and-forward and the 1x2 MISO
bound serve as references.

Convention: here delta is the *growth* exponent of the squared distortion,
Delta^2 ~ rho^delta with delta <= 0 meaning a distortion that does not decay.
The simulator's delta_exponent is the decay rate of Delta^2 = rho^-delta and
corresponds to -delta in this module's sign convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT5 = math.sqrt(5.0)

# Multiplexing-gain breakpoints of the optimized tradeoff, kept as exact
# expressions in sqrt(5) so points near them classify consistently.
R_MISO_DEPART = 0.25  # below: the 1x2 MISO bound 2(1-r) is met exactly
R_DF_MERGE = 2.0 * (SQRT5 - 1.0) / (9.0 - SQRT5)  # above: quantization stops helping
R_DF_KINK = (SQRT5 - 1.0) / (SQRT5 + 1.0)  # above: even DF saturates its slot split

# Slope of the shared DoQF/DF segment, 2/(3 - sqrt5) = (3 + sqrt5)/2.
DF_SLOPE = 2.0 / (3.0 - SQRT5)
# Optimal DF listening fraction below R_DF_KINK: the inverse golden ratio.
T0_DF_OPT = 2.0 / (SQRT5 + 1.0)

# Root-finding schedule for the cubic defining the optimal split: bisection
# down to this bracket width, then Newton until the residual is tiny.
V_BISECT_WIDTH = 1e-6
V_RESIDUAL = 1e-12


def _pos(x: float) -> float:
    """Positive part (x)+ = max(x, 0)."""
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class DmtQuery:
    """A point (r, t0, delta) at which the fixed-parameter tradeoff is read.

    r      -- multiplexing gain in [0, 1]
    t0     -- listening fraction of the frame, in (0, 1)
    delta  -- distortion growth exponent (Delta^2 ~ rho^delta), any real
    """

    r: float
    t0: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("multiplexing gain r must lie in [0, 1]")
        if not 0.0 < self.t0 < 1.0:
            raise ValueError("t0 must lie strictly inside (0, 1)")

    def terms(self) -> tuple[float, float, float, float]:
        """The four per-outcome exponents (d1, d2, d3, d4) at this point."""
        return (d1(self.t0, self.r), d2(self.t0, self.delta, self.r),
                d3(self.t0, self.delta, self.r), d4(self.t0, self.delta, self.r))

    def d(self) -> float:
        """The fixed-parameter tradeoff d(t0, delta, r) = min of the four terms."""
        return d_of(self.t0, self.delta, self.r)


@dataclass(frozen=True)
class DmtCurve:
    """A sampled tradeoff curve: rows (r, d, t0_star, delta_star).

    t0_star / delta_star are the parameters achieving d at that r; entries
    that do not apply to the protocol (delta for df, both for miso) are NaN.
    """

    points: list[tuple[float, float, float, float]]
    protocol: str


def d1(t0: float, r: float) -> float:
    """Decay exponent of the decoded-relay outcome (relay heard the message).

    Only the listening fraction matters: the combined slot-0/slot-1 outage
    region behaves like the MISO one for t0 <= 1/2, and the requirement that
    the relay itself decodes caps the exponent for larger t0.
    """
    if t0 <= 0.5:
        return 2.0 * _pos(1.0 - r)
    if r < 1.0 - t0:
        return 2.0 - r / (1.0 - t0)
    return _pos(1.0 - r) / t0


def d2(t0: float, delta: float, r: float) -> float:
    """Decay exponent of the combined-description outcome (forwarding worked).

    Four regimes.  A non-growing distortion (delta <= 0) or one so coarse that
    the quantize condition eventually never holds (delta > 1 - (1 - r/t0)+)
    makes the outcome vanish at high SNR, and the exponent is set to the
    neutral 2(1-r)+ so it never binds.  In between, the exponent follows the
    region geometry, split by whether the description-delivery constraint is
    slack (first line) or active (second line), with a separate shape for
    t0 < 1/2.
    """
    if delta <= 0.0:
        return 2.0 * _pos(1.0 - r)
    if delta > 1.0 - _pos(1.0 - r / t0):
        return 2.0 * _pos(1.0 - r)
    t1 = 1.0 - t0
    if t0 >= 0.5:
        lhs = r / t1 - _pos(1.0 - r / t0) - (t0 / t1) * delta
        if lhs <= 1.0 - r:
            return _pos(1.0 - r) + max(_pos(1.0 - r / t0), 1.0 - r - delta)
        return lhs + max((1.0 - 2.0 * r) / t0 + (t1 / t0) * _pos(1.0 - r / t0),
                         _pos(1.0 - r / t0))
    if 2.0 * t0 * t1 <= r:
        return _pos(1.0 - r / t0) + max(_pos(1.0 - r),
                                        (1.0 - r) / t1
                                        - (t0 / t1) * _pos(1.0 - r / t0)
                                        - (t0 / t1) * delta)
    # The two (1 - r/t0)+ terms cancel; they are kept separate because they
    # enter as distinct pieces of the region decomposition (direct-link order
    # plus delivery-constraint order) and cancel only in this regime.
    return _pos(1.0 - r / t0) + r / t1 - _pos(1.0 - r / t0) - (t0 / t1) * delta


def d3(t0: float, delta: float, r: float) -> float:
    """Decay exponent of the lost-description outcome (forwarding failed).

    The destination then decodes from its slot-0 observation alone.  Finer
    distortion (larger delta) makes the description rate grow and delivery
    fail more often, so this exponent is nondecreasing in delta; past
    delta > 1 - (1 - r/t0)+ the quantize condition is void and the neutral
    2(1-r)+ is returned.
    """
    if delta > 1.0 - _pos(1.0 - r / t0):
        return 2.0 * _pos(1.0 - r)
    t1 = 1.0 - t0
    base = 2.0 * _pos(1.0 - r / t0)
    return base + _pos(base + (t0 / t1) * delta - r / t1)


def d4(t0: float, delta: float, r: float) -> float:
    """Decay exponent of the silent-relay outcome (source-relay link too weak).

    Requires the relay observation to fall below the distortion floor, which
    for delta <= 0 stops happening at high SNR (neutral value returned).
    """
    if delta > 0.0:
        return _pos(1.0 - r) + max(_pos(1.0 - r / t0), _pos(1.0 - delta))
    return 2.0 * _pos(1.0 - r)


def d_of(t0: float, delta: float, r: float) -> float:
    """Fixed-parameter tradeoff: the minimum of the four outcome exponents."""
    return min(d1(t0, r),
               d2(t0, delta, r),
               d3(t0, delta, r),
               d4(t0, delta, r))


def _split_cubic(v: float, r: float) -> float:
    """The cubic whose root in [1/2, 2/(sqrt5+1)] is the optimal split."""
    return 2.0 * (1.0 + r) * v**3 - (4.0 + 5.0 * r) * v**2 \
        + 2.0 * (1.0 + 4.0 * r) * v - 4.0 * r


def _split_cubic_deriv(v: float, r: float) -> float:
    return 6.0 * (1.0 + r) * v**2 - 2.0 * (4.0 + 5.0 * r) * v + 2.0 * (1.0 + 4.0 * r)


def solve_v_star(r: float) -> float:
    """Optimal listening fraction on the curved segment of the tradeoff.

    Returns the unique root in [1/2, 2/(sqrt5+1)] of

        2(1+r) v^3 - (4+5r) v^2 + 2(1+4r) v - 4r = 0,

    by bisection to a 1e-6 bracket followed by Newton polish to a residual
    below 1e-12 (the derivative is well conditioned on the bracket).  Raises
    ValueError when the cubic does not change sign on the bracket, which
    signals an r outside (1/4, R_DF_MERGE] where this segment applies.
    """
    lo, hi = 0.5, T0_DF_OPT
    flo = _split_cubic(lo, r)
    fhi = _split_cubic(hi, r)
    if flo == 0.0:
        return lo
    if (flo > 0.0) == (fhi > 0.0):
        # At the segment ends the root coincides with a bracket endpoint and
        # rounding can push it a few ulps outside; a tiny residual at an
        # endpoint is that root, anything larger means r is out of range.
        if abs(fhi) < 1e-9:
            v = hi
        elif abs(flo) < 1e-9:
            v = lo
        else:
            raise ValueError(
                f"no sign change on [{lo}, {hi:.6f}] at r={r!r}; "
                "the curved segment only covers 1/4 < r <= R_DF_MERGE")
    else:
        while hi - lo > V_BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            fmid = _split_cubic(mid, r)
            if fmid == 0.0:
                return mid
            if (fmid > 0.0) == (flo > 0.0):
                lo, flo = mid, fmid
            else:
                hi = mid
        v = 0.5 * (lo + hi)
    for _ in range(50):
        f = _split_cubic(v, r)
        if abs(f) < V_RESIDUAL:
            return v
        v -= f / _split_cubic_deriv(v, r)
    raise ValueError(f"Newton polish failed to reach residual {V_RESIDUAL} at r={r!r}")


@dataclass(frozen=True)
class DoqfOptimum:
    """Optimized tradeoff point: exponent plus the parameters achieving it."""

    d: float
    t0_star: float
    delta_star: float


@dataclass(frozen=True)
class DfOptimum:
    """Optimized decode-and-forward tradeoff point (no distortion parameter)."""

    d: float
    t0_star: float


def dmt_doqf_star(r: float) -> DoqfOptimum:
    """Optimized tradeoff sup over (t0, delta) of d_of, with its maximizers.

    Four branches: the MISO bound 2(1-r)+ up to r = 1/4 (split 1/2, delta 0);
    a curved segment 2 - r/(1 - v*(r)) driven by the cubic root up to
    R_DF_MERGE; then the decode-and-forward line and tail — quantization no
    longer improves the exponent there, and the distortion exponent formally
    moves to r/t0* where the combined-description outcome stops occurring.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("multiplexing gain r must lie in [0, 1]")
    if r <= R_MISO_DEPART:
        return DoqfOptimum(d=2.0 * _pos(1.0 - r), t0_star=0.5, delta_star=0.0)
    if r <= R_DF_MERGE:
        v = solve_v_star(r)
        delta = 4.0 * r / v + 2.0 * (r + 1.0) * v - 2.0 - 5.0 * r
        return DoqfOptimum(d=2.0 - r / (1.0 - v), t0_star=v, delta_star=delta)
    if r <= R_DF_KINK:
        return DoqfOptimum(d=2.0 - DF_SLOPE * r, t0_star=T0_DF_OPT,
                           delta_star=r / T0_DF_OPT)
    t0 = 1.0 / (2.0 - r)
    return DoqfOptimum(d=(2.0 - r) * (1.0 - r), t0_star=t0, delta_star=r / t0)


def dmt_df_star(r: float) -> DfOptimum:
    """Optimized decode-and-forward tradeoff: line of slope DF_SLOPE, then tail.

    The listening fraction is the inverse golden ratio until the kink at
    R_DF_KINK, after which t0 = 1/(2-r) and d = (2-r)(1-r).
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("multiplexing gain r must lie in [0, 1]")
    if r <= R_DF_KINK:
        return DfOptimum(d=2.0 - DF_SLOPE * r, t0_star=T0_DF_OPT)
    return DfOptimum(d=(2.0 - r) * (1.0 - r), t0_star=1.0 / (2.0 - r))


def miso_bound(r: float) -> float:
    """The 1x2 MISO upper bound 2(1-r)+ on any single-relay tradeoff."""
    return 2.0 * _pos(1.0 - r)


def dmt_curve(r_values, protocol: str = "doqf") -> DmtCurve:
    """Sample a protocol's optimized tradeoff on a grid of multiplexing gains.

    Rows are (r, d, t0_star, delta_star); parameters a protocol does not have
    are NaN (delta for df, both for miso).
    """
    nan = float("nan")
    points: list[tuple[float, float, float, float]] = []
    if protocol == "doqf":
        for r in r_values:
            opt = dmt_doqf_star(r)
            points.append((float(r), opt.d, opt.t0_star, opt.delta_star))
    elif protocol == "df":
        for r in r_values:
            df = dmt_df_star(r)
            points.append((float(r), df.d, df.t0_star, nan))
    elif protocol == "miso":
        for r in r_values:
            points.append((float(r), miso_bound(r), nan, nan))
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    return DmtCurve(points=points, protocol=protocol)
