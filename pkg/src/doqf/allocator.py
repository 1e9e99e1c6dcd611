"""Minimize the outage gain over the slot split and the power split.

The objective is f(t1, b0) = xi_doqf_convex(t1, b0, 1-b0, ...): the budget is
tight at the optimum, so beta1 = 1 - beta0 reduces the problem to two
variables on the open unit square, where f is convex, smooth away from the
frontier, and blows up on it.  A projected-gradient descent with backtracking
line search is entirely adequate at this size and easy to audit; a short
Newton polish on the finite-difference gradient then pushes the stationarity
certificate below the noise floor of function-value comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gain import xi_doqf_convex

# Iterates are clamped to this closed box; the objective explodes near the
# frontier so the clamp is almost never active at the solution.
CLAMP_LO = 1e-4
CLAMP_HI = 1.0 - 1e-4
FD_STEP = 1e-6    # central-difference step for the gradient
HESS_STEP = 1e-5  # central-difference step for the Hessian (on FD gradients)
POLISH_GNORM = 1e-5  # hand over from line search to Newton polish below this
POLISH_MAX = 50


@dataclass(frozen=True)
class AllocationResult:
    t1_star: float
    beta0_star: float
    beta1_star: float
    xi_star: float
    grad_norm: float
    iterations: int


class ConvergenceError(RuntimeError):
    """Descent did not reach the requested gradient norm; carries the best iterate."""

    def __init__(self, message: str, best: AllocationResult):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    n_pairs: int
    worst_margin: float                 # max of f(mid) - (f(P)+f(Q))/2 over pairs
    violating_pair: tuple | None        # ((t1,b0), (t1,b0)) of the worst violation


def _objective(c01, c02, c12, R):
    def f(x):
        t1, b0 = x
        if not (0.0 < t1 < 1.0 and 0.0 < b0 < 1.0):
            return math.inf
        try:
            return float(xi_doqf_convex(t1, b0, 1.0 - b0, c01, c02, c12, R))
        except OverflowError:
            return math.inf
    return f


def _fd_gradient(f, x, h=FD_STEP):
    g = np.zeros(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def _fd_hessian(f, x, h=HESS_STEP):
    H = np.zeros((2, 2))
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        H[:, i] = (_fd_gradient(f, x + e) - _fd_gradient(f, x - e)) / (2.0 * h)
    return 0.5 * (H + H.T)


def minimize_outage_gain(c01, c02, c12, R, tolerance: float = 1e-8,
                         max_iterations: int = 20_000, x0=None) -> AllocationResult:
    """Minimize f(t1, beta0) = xi_doqf_convex(t1, beta0, 1-beta0, ...) on (0,1)^2.

    Projected gradient with Armijo backtracking does the travelling; the
    finite-difference gradient avoids hand-deriving bracket' across its
    removable singularity at t = 1/2.  Armijo cannot certify decrease once
    the achievable per-step decrease (~|grad|^2) falls below eps*|f|, which
    happens around |grad| ~ 3e-8 here, so a Newton polish on the FD gradient
    (pure root finding, no function-value comparisons) finishes the descent.
    Converged when the gradient norm drops below `tolerance`.

    Raises ConvergenceError (carrying the best iterate seen) if the tolerance
    is not reached within max_iterations.
    """
    for name, c in (("c01", c01), ("c02", c02), ("c12", c12)):
        if not c > 0:
            raise ValueError(f"{name} must be positive")
    if not R > 0:
        raise ValueError("rate must be positive")

    f = _objective(c01, c02, c12, R)
    x = np.array([0.5, 0.5]) if x0 is None else np.clip(np.asarray(x0, dtype=float), CLAMP_LO, CLAMP_HI)
    fx = f(x)
    step = 1.0
    grad = _fd_gradient(f, x)
    gnorm = float(np.linalg.norm(grad))
    iterations = 0

    while iterations < max_iterations and gnorm >= max(tolerance, POLISH_GNORM):
        # Backtracking line search on the projected step (Armijo, c1 = 1e-4).
        accepted = False
        s = step
        while s >= 1e-16:
            trial = np.clip(x - s * grad, CLAMP_LO, CLAMP_HI)
            ft = f(trial)
            decrease = float(grad @ (x - trial))
            if ft <= fx - 1e-4 * decrease and ft < fx:
                x, fx = trial, ft
                step = s * 2.0  # let the step grow again after a success
                accepted = True
                break
            s *= 0.5
        iterations += 1
        if not accepted:
            break  # f-comparison noise floor; the polish phase takes over
        grad = _fd_gradient(f, x)
        gnorm = float(np.linalg.norm(grad))

    # Newton polish: solve H dx = -grad with an FD Hessian and accept on
    # gradient-norm decrease alone, halving the step when it fails.
    polish = 0
    while gnorm >= tolerance and polish < POLISH_MAX and iterations < max_iterations:
        H = _fd_hessian(f, x)
        try:
            dx = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            break
        improved = False
        for _ in range(30):
            trial = np.clip(x + dx, CLAMP_LO, CLAMP_HI)
            gt = _fd_gradient(f, trial)
            if float(np.linalg.norm(gt)) < gnorm:
                x, grad = trial, gt
                gnorm = float(np.linalg.norm(gt))
                improved = True
                break
            dx *= 0.5
        polish += 1
        iterations += 1
        if not improved:
            break

    fx = f(x)
    if gnorm >= tolerance:
        best = AllocationResult(float(x[0]), float(x[1]), float(1.0 - x[1]),
                                fx, gnorm, iterations)
        raise ConvergenceError(
            f"gradient norm {gnorm:.3e} did not reach tolerance {tolerance:.1e} "
            f"after {iterations} iterations", best)

    return AllocationResult(
        t1_star=float(x[0]),
        beta0_star=float(x[1]),
        beta1_star=float(1.0 - x[1]),
        xi_star=fx,
        grad_norm=gnorm,
        iterations=iterations,
    )


def midpoint_convexity_check(c01, c02, c12, R, n_pairs: int = 1000,
                             rng=None, slack: float = 1e-9) -> ConvexityReport:
    """Sample n_pairs random pairs and assert f(midpoint) <= (f(P)+f(Q))/2 + slack.

    Points are drawn uniformly on (1e-3, 1-1e-3)^2 in (t1, beta0); infinities
    from the frontier blow-up compare correctly (inf <= inf).  On failure the
    report carries the worst violating pair so it can be replayed.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    if rng is None:
        rng = np.random.default_rng(0)
    f = _objective(c01, c02, c12, R)
    worst = -math.inf
    worst_pair = None
    passed = True
    for _ in range(n_pairs):
        p = rng.uniform(1e-3, 1.0 - 1e-3, size=2)
        q = rng.uniform(1e-3, 1.0 - 1e-3, size=2)
        fp, fq, fm = f(p), f(q), f(0.5 * (p + q))
        chord = 0.5 * (fp + fq)
        if math.isinf(chord):
            margin = -math.inf if math.isinf(fm) else fm - chord  # fm finite < inf: fine
        else:
            margin = fm - chord
        if margin > worst:
            worst = margin
            worst_pair = (tuple(p), tuple(q))
        if margin > slack:
            passed = False
    return ConvexityReport(passed=passed, n_pairs=n_pairs,
                           worst_margin=worst,
                           violating_pair=None if passed else worst_pair)
