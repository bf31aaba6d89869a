"""Gauss quadrature built from the classical recursion tables.

Nodes and weights come from the Golub-Welsch eigenproblem of the symmetric
tridiagonal matrix formed by the orthonormal-recursion coefficients, so every
rule is exact for polynomials of degree <= 2n-1 against its weight.  A unit
(Legendre-type) rule on an arbitrary finite interval and the half-sign
epsilon integral used by the beta = 1 partner functions live here too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .classical import op_log_norm, recurrence_coefficients
from .weights import WeightSpec

__all__ = [
    "QuadratureRule",
    "EvaluationError",
    "gauss_rule",
    "legendre_rule",
    "integrate",
    "epsilon_integral",
]


class EvaluationError(ValueError):
    """Raised when an integrand is non-finite at a quadrature node."""

    def __init__(self, node: float):
        super().__init__(f"integrand not finite at node x={node}")
        self.node = node


@dataclass(frozen=True)
class QuadratureRule:
    """An n-point rule: sum(weights * f(nodes)) integrates f * weight."""

    nodes: np.ndarray
    weights: np.ndarray
    support: tuple[float, float]
    associated_weight: WeightSpec | str  # a WeightSpec, or "unit"

    def __post_init__(self) -> None:
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    @property
    def n(self) -> int:
        return len(self.nodes)


def _golub_welsch(diag: np.ndarray, offdiag: np.ndarray, mass: float):
    """Nodes from the Jacobi-matrix eigenproblem; weights via the
    Christoffel function 1 / sum_k p_k(x_i)^2 over orthonormal polynomials.

    Eigenvector first components lose all relative accuracy once weights
    drop below ~1e-40, whereas the Christoffel sum is cancellation-free.
    """
    nodes = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    n = len(diag)
    with np.errstate(over="ignore"):
        p_prev = np.zeros_like(nodes)
        p_cur = np.full_like(nodes, 1.0 / np.sqrt(mass))
        total = p_cur**2
        for k in range(n - 1):
            p_next = ((nodes - diag[k]) * p_cur - (offdiag[k - 1] * p_prev if k > 0 else 0.0)) / offdiag[k]
            p_prev, p_cur = p_cur, p_next
            total += p_cur**2
        weights = np.where(np.isfinite(total), 1.0 / total, 0.0)
    return nodes, weights


def gauss_rule(weight: WeightSpec, n: int) -> QuadratureRule:
    """n-point Gauss rule for the given classical weight."""
    if n < 1:
        raise ValueError("need at least one quadrature point")
    diag = np.empty(n)
    offdiag = np.empty(max(n - 1, 0))
    for j in range(n):
        A, B, C = recurrence_coefficients(weight, j)
        diag[j] = B
        if j < n - 1:
            Anext = recurrence_coefficients(weight, j + 1)
            offdiag[j] = np.sqrt(A * Anext[2])
    if n == 1:
        nodes = diag.copy()
        weights = np.array([np.exp(op_log_norm(weight, 0))])
    else:
        nodes, weights = _golub_welsch(diag, offdiag, float(np.exp(op_log_norm(weight, 0))))
    # Far half-line nodes can underflow to weight 0.0; they contribute nothing
    # in double precision, so drop them rather than violate positivity.
    keep = weights > 0.0
    return QuadratureRule(nodes[keep], weights[keep], weight.support, weight)


def legendre_rule(lo: float, hi: float, n: int) -> QuadratureRule:
    """Unit-weight Gauss rule on a finite interval [lo, hi]."""
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError("legendre_rule needs a finite interval lo < hi")
    base = gauss_rule(WeightSpec("jacobi", 0.0, 0.0), n)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return QuadratureRule(half * base.nodes + mid, half * base.weights, (lo, hi), "unit")


def integrate(rule: QuadratureRule, f) -> float:
    """sum w_i f(x_i); the caller supplies f already divided by the weight."""
    vals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = rule.nodes[~np.isfinite(vals)][0]
        raise EvaluationError(float(bad))
    return float(np.dot(rule.weights, vals))


def _half_line_integral(f, x0: float, direction: int, n: int) -> float:
    """Integral of f over [x0, +inf) (direction=+1) or (-inf, x0] (-1).

    Uses an exponentially mapped Gauss-Laguerre rule; f must decay at least
    as fast as e^{-|t|} times a polynomial for the mapping to converge.
    """
    lag = gauss_rule(WeightSpec("laguerre", 0.0), n)
    t, w = lag.nodes, lag.weights
    vals = np.asarray(f(x0 + direction * t), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = (x0 + direction * t)[~np.isfinite(vals)][0]
        raise EvaluationError(float(bad))
    return float(np.dot(w, np.exp(t) * vals))


def epsilon_integral(f, x: float, support: tuple[float, float], n: int = 200) -> float:
    """Integral of eps(x - y) f(y) dy with eps(r) = |r| / (2r).

    Splits the domain at x so the sign discontinuity falls on a panel
    boundary, then returns (integral below x - integral above x) / 2.
    """
    lo, hi = support
    if not lo < x < hi and not (x == lo or x == hi):
        raise ValueError(f"x={x} outside support {support}")

    def finite_part(aa: float, bb: float) -> float:
        if bb <= aa:
            return 0.0
        return integrate(legendre_rule(aa, bb, n), f)

    below = (
        finite_part(lo, x)
        if np.isfinite(lo)
        else _half_line_integral(f, x, -1, n)
    )
    above = (
        finite_part(x, hi)
        if np.isfinite(hi)
        else _half_line_integral(f, x, +1, n)
    )
    return 0.5 * (below - above)
