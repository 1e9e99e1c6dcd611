"""Closed-form high-SNR outage gains and the 2-D integral oracle that validates them.

The outage probability of every protocol treated here decays like xi/rho^2 at
high SNR; xi (the outage gain) is a weighted sum of two-slot region integrals
that reduce to the scalar function bracket(t, R) below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

# Width of the guard band around t = 1/2 inside which bracket() switches to
# the removable-singularity limit.
TOL_HALF = 1e-6


@dataclass(frozen=True)
class ProtocolParams:
    """Static protocol configuration: slot split and power amplitudes.

    t0      -- fraction of the frame the relay listens (slot 0); t1 = 1 - t0
    alpha0  -- source amplitude factor (source power alpha0 * rho)
    alpha1  -- relay amplitude factor (relay power alpha1 * rho during slot 1)
    R       -- target rate in nats per channel use

    In budget-normalized form the powers are beta0 = alpha0 and
    beta1 = alpha1 * t1, and a unit energy budget reads beta0 + beta1 <= 1.
    The budget is deliberately not enforced here: the closed-form gains are
    well defined for any positive amplitudes (and the classical "all alphas
    equal 1" normalization violates it); feasibility is checked where it
    matters, by the optimizer and the CLI.
    """

    t0: float
    alpha0: float
    alpha1: float
    R: float

    def __post_init__(self):
        if not 0.0 < self.t0 < 1.0:
            raise ValueError("t0 must lie strictly inside (0, 1)")
        if not self.alpha0 > 0 or not self.alpha1 > 0:
            raise ValueError("amplitude factors must be positive")
        if self.R < 0:
            raise ValueError("rate must be nonnegative")

    @property
    def t1(self) -> float:
        return 1.0 - self.t0

    @property
    def beta0(self) -> float:
        return self.alpha0

    @property
    def beta1(self) -> float:
        return self.alpha1 * self.t1

    @property
    def budget_ok(self) -> bool:
        """Unit-energy feasibility beta0 + beta1 <= 1 (up to rounding)."""
        return self.beta0 + self.beta1 <= 1.0 + 1e-12


@dataclass(frozen=True)
class OutageGainResult:
    """Outage gain split into its two region contributions.

    term_simo -- weight c02*c01/alpha0^2 times bracket(t0, R): the cut where
                 the relay listens (source heard by relay + destination)
    term_miso -- weight c02*c12/(alpha0*alpha1) times bracket(t1, R): the cut
                 where the relay forwards (source + relay heard by destination)
    """

    term_simo: float
    term_miso: float

    @property
    def xi(self) -> float:
        return self.term_simo + self.term_miso


def bracket(t, R):
    """The slot-weighted outage region area 1/2 + e^{2R}/(4t-2) - t e^{R/t}/(2t-1).

    Equals the area of {(u, v) in R+^2 : (1-t) log(1+u) + t log(1+u+v) <= R}
    (see region_integral, the numerical oracle for this identity).  Both
    denominators vanish at t = 1/2; the singularity is removable with limit
    1/2 + e^{2R} (2R - 1)/2, used inside a +-1e-6 guard band so optimizers can
    cross t = 1/2 smoothly.

    Accepts scalars or numpy arrays in t and R (broadcasting applies).
    """
    t = np.asarray(t, dtype=float)
    R = np.asarray(R, dtype=float)
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise ValueError("slot fraction t must lie strictly inside (0, 1)")
    near_half = np.abs(t - 0.5) <= TOL_HALF
    # Where t is in the guard band, evaluate the generic expression at a safe
    # dummy t to avoid 0/0 warnings, then overwrite with the limit branch.
    # e^{R/t} overflowing to inf for tiny t is the correct limit (the region
    # area genuinely diverges as t -> 0), so overflow is not an error here.
    t_safe = np.where(near_half, 0.25, t)
    with np.errstate(over="ignore"):
        generic = 0.5 + np.exp(2.0 * R) / (4.0 * t_safe - 2.0) \
            - t_safe * np.exp(R / t_safe) / (2.0 * t_safe - 1.0)
        limit = 0.5 + np.exp(2.0 * R) * (2.0 * R - 1.0) / 2.0
    out = np.where(near_half, limit, generic)
    if out.ndim == 0:
        return float(out)
    return out


def xi_cs_hd(p: ProtocolParams, c01, c02, c12) -> OutageGainResult:
    """Outage gain of the half-duplex cut-set bound (also attained by DoQF).

    xi = (c02 c01 / alpha0^2) bracket(t0, R) + (c02 c12 / (alpha0 alpha1)) bracket(t1, R).

    The c's are the gain densities at zero of the three links.  The same value
    is the DoQF outage gain: the protocol meets the cut-set lower bound, which
    is why no separate xi_doqf function exists.
    """
    term_simo = (c02 * c01 / p.alpha0**2) * bracket(p.t0, p.R)
    term_miso = (c02 * c12 / (p.alpha0 * p.alpha1)) * bracket(p.t1, p.R)
    return OutageGainResult(term_simo=term_simo, term_miso=term_miso)


def xi_doqf_convex(t1, beta0, beta1, c01, c02, c12, R):
    """The DoQF outage gain in budget coordinates (t1, beta0, beta1).

    Substituting alpha0 = beta0, alpha1 = beta1/t1 into xi_cs_hd gives

        (c02 c01 / beta0^2) bracket(1-t1, R) + (c02 c12 t1 / (beta0 beta1)) bracket(t1, R),

    which is jointly convex on (0,1) x {beta0, beta1 > 0} and blows up on the
    frontier — the form the allocator minimizes.  Vectorized over any argument.
    """
    return (c02 * c01 / (np.asarray(beta0, dtype=float) ** 2)) * bracket(1.0 - np.asarray(t1, dtype=float), R) \
        + (c02 * c12 * np.asarray(t1, dtype=float) / (np.asarray(beta0, dtype=float) * np.asarray(beta1, dtype=float))) * bracket(t1, R)


def _xi_df_terms(p: ProtocolParams, c01, c02, c12) -> tuple[float, float]:
    """(forwarding term, decode-failure term) of the DF outage gain."""
    term_miso = (c02 * c12 / (p.alpha0 * p.alpha1)) * bracket(p.t1, p.R)
    # When the relay fails to decode (probability ~ c01 (e^{R/t0}-1)/(alpha0 rho))
    # the destination is left with the direct link alone
    # (probability of outage ~ c02 (e^R-1)/(alpha0 rho)); the product gives the
    # rho^-2 coefficient.
    term_fallback = (c01 * c02 / p.alpha0**2) * (math.expm1(p.R / p.t0)) * (math.expm1(p.R))
    return term_miso, term_fallback


def xi_df(p: ProtocolParams, c01, c02, c12) -> float:
    """Outage gain of the decode-and-forward baseline (relay silent on decode failure)."""
    term_miso, term_fallback = _xi_df_terms(p, c01, c02, c12)
    return term_miso + term_fallback


def region_integral(t_a, t_b, R, method: str = "quadrature", resolution: float = 1e-8,
                    rng=None, return_error: bool = False):
    """Numerical oracle for bracket(t_a, R): area of the two-slot outage region.

    Evaluates the plane integral

        I = integral over {(u, v) in R+^2 : t_b log(1+u) + t_a log(1+u+v) <= R} du dv,

    which, by the change of variables x = log(1+u), y = log(1+v/(1+u))
    (region {x + t_a y <= R}, Jacobian e^{2x+y}), equals bracket(t_a, R).
    The region is bounded: u <= e^R - 1 and v <= (1+u)(e^{R/t_a} - 1) follow
    from the indicator, exactly.

    method "quadrature": the inner v-integral is the exact interval length
        v_max(u) = e^{R/t_a} (1+u)^{1 - 1/t_a} - 1 - u, reduced analytically,
        and the remaining 1-D integral over u in [0, e^R - 1] goes through
        adaptive quadrature; `resolution` is the target absolute/relative
        tolerance and the call fails if the quadrature cannot certify it.
    method "monte_carlo": uniform rejection sampling in the bounding box;
        `resolution` is the target relative standard error (needs an rng).

    With return_error=True, returns (value, estimated_error).
    """
    if not (0.0 < t_a < 1.0 and 0.0 < t_b < 1.0):
        raise ValueError("slot fractions must lie inside (0, 1)")
    if abs(t_a + t_b - 1.0) > 1e-12:
        raise ValueError("slot fractions must sum to 1")
    if R < 0:
        raise ValueError("rate must be nonnegative")
    if R == 0.0:
        return (0.0, 0.0) if return_error else 0.0

    u_max = math.expm1(R)
    v0 = math.expm1(R / t_a)  # v_max(0), the tallest point of the region

    def v_max(u):
        return math.exp(R / t_a) * (1.0 + u) ** (1.0 - 1.0 / t_a) - 1.0 - u

    if method == "quadrature":
        value, err = integrate.quad(v_max, 0.0, u_max,
                                    epsabs=resolution, epsrel=resolution, limit=200)
        if err > max(resolution, resolution * abs(value)) * 10.0:
            raise ArithmeticError(
                f"quadrature error estimate {err:.3e} exceeds requested resolution {resolution:.3e}")
        return (value, err) if return_error else value

    if method == "monte_carlo":
        if rng is None:
            rng = np.random.default_rng(0)
        box_area = u_max * v0
        n_pilot = 200_000
        u = rng.uniform(0.0, u_max, size=n_pilot)
        v = rng.uniform(0.0, v0, size=n_pilot)
        hits = int(np.count_nonzero(v <= np.exp(R / t_a) * (1.0 + u) ** (1.0 - 1.0 / t_a) - 1.0 - u))
        p = hits / n_pilot
        # Samples needed for the requested relative standard error of p*box_area.
        if p == 0.0:
            raise ArithmeticError("pilot run saw no hits; region too thin for monte_carlo method")
        n_needed = int(math.ceil((1.0 - p) / (p * resolution**2)))
        n_cap = 50_000_000
        if n_needed > n_cap:
            raise ArithmeticError(
                f"monte_carlo resolution {resolution:.3e} needs ~{n_needed:.2e} samples (cap {n_cap:.0e})")
        n_extra = max(n_needed - n_pilot, 0)
        if n_extra:
            u = rng.uniform(0.0, u_max, size=n_extra)
            v = rng.uniform(0.0, v0, size=n_extra)
            hits += int(np.count_nonzero(v <= np.exp(R / t_a) * (1.0 + u) ** (1.0 - 1.0 / t_a) - 1.0 - u))
        n_total = n_pilot + n_extra
        p = hits / n_total
        value = box_area * p
        err = box_area * math.sqrt(max(p * (1.0 - p), 0.0) / n_total)
        return (value, err) if return_error else value

    raise ValueError(f"unknown method {method!r}")
