"""Gamma-family helpers and expectations against a unit-exponential weight.

The closed-form outage expressions need the complete and upper-incomplete
Gamma functions plus integrals of the form ``E[f(h)]`` where ``h`` has unit
exponential density.  The Gamma functions delegate to scipy's well-tested
implementations; the expectation uses Gauss-Laguerre quadrature with node
doubling and an adaptive-quadrature fallback.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy import integrate
from scipy import special as sp

__all__ = [
    "gamma_complete",
    "gamma_upper_incomplete",
    "gamma_lower_incomplete",
    "expect_over_h",
    "QuadratureError",
]


class QuadratureError(RuntimeError):
    """Raised when the exponential-weight expectation fails to converge.

    Carries ``achieved`` (the best error estimate reached) so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


def gamma_complete(s):
    """Gamma function for strictly positive arguments."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError(f"gamma_complete needs s > 0, got {s!r}")
    return sp.gamma(s)


def gamma_upper_incomplete(s, x):
    """Non-regularized upper incomplete Gamma: integral of t^(s-1) e^-t over [x, inf).

    Requires ``s > 0`` and ``x >= 0``; at ``x = 0`` this equals the complete
    Gamma function.
    """
    s_arr = np.asarray(s, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError(f"gamma_upper_incomplete needs s > 0, got {s!r}")
    if np.any(x_arr < 0.0):
        raise ValueError(f"gamma_upper_incomplete needs x >= 0, got {x!r}")
    return sp.gammaincc(s, x) * sp.gamma(s)


def gamma_lower_incomplete(s, x):
    """Non-regularized lower incomplete Gamma, the complement of the upper one."""
    s_arr = np.asarray(s, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError(f"gamma_lower_incomplete needs s > 0, got {s!r}")
    if np.any(x_arr < 0.0):
        raise ValueError(f"gamma_lower_incomplete needs x >= 0, got {x!r}")
    return sp.gammainc(s, x) * sp.gamma(s)


# 512-node rules already overflow in double precision, so the ladder stops
# at 256 and hands anything still unconverged to adaptive integration.
_NODE_COUNTS = (64, 128, 256)
_laguerre_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _laguerre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _laguerre_cache.get(n)
    if rule is None:
        rule = sp.roots_laguerre(n)
        _laguerre_cache[n] = rule
    return rule


def expect_over_h(f: Callable[[np.ndarray], np.ndarray],
                  abs_tol: float = 1e-9, rel_tol: float = 1e-12) -> float:
    """Expectation of ``f(h)`` for ``h`` with unit exponential density.

    ``f`` must accept a 1-d float array and return elementwise values.
    Gauss-Laguerre quadrature starts at 64 nodes and doubles until two
    successive estimates agree within ``abs_tol`` plus ``rel_tol`` of the
    running value (the relative term matters when the integrand's scale is
    many orders above one); if the node budget runs out, a general-purpose
    adaptive integration of ``f(h) e^-h`` takes over.  Raises
    :class:`QuadratureError` if neither route converges.
    """
    def tolerance(estimate: float) -> float:
        return abs_tol + rel_tol * abs(estimate)

    previous = None
    for n in _NODE_COUNTS:
        nodes, weights = _laguerre_rule(n)
        estimate = float(np.dot(weights, f(nodes)))
        if previous is not None and abs(estimate - previous) < tolerance(estimate):
            return estimate
        previous = estimate

    value, err = integrate.quad(
        lambda h: float(f(np.asarray([h]))[0]) * np.exp(-h),
        0.0, np.inf, epsabs=abs_tol / 10.0, epsrel=rel_tol, limit=200,
    )
    if err > tolerance(value):
        raise QuadratureError(
            "exponential-weight expectation did not converge", achieved=err
        )
    return value
