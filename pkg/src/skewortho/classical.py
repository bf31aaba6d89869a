"""Classical orthogonal polynomials: Jacobi P_j^{a,b}, associated Laguerre
L_j^a, Hermite H_j.

Evaluation is by forward three-term recursion seeded from the closed-form
P_0, P_1 rows; norms and leading coefficients are computed in the log domain
so that large orders never overflow a double.  ``P_j = 0`` for ``j < 0`` is
encoded explicitly (several skew-orthogonal expansions rely on it).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .weights import ParameterDomainError, WeightSpec

__all__ = [
    "OpFamily",
    "OrderRangeError",
    "op_eval",
    "op_eval_all",
    "op_norm",
    "op_log_norm",
    "leading_coefficient",
    "recurrence_row",
    "recurrence_coefficients",
    "derivative_constant_A",
    "derivative_constant_B",
    "op_weighted_derivative",
]


class OrderRangeError(ValueError):
    """Raised when a polynomial order exceeds the family's table."""


def recurrence_coefficients(weight: WeightSpec, j: int) -> tuple[float, float, float]:
    """Row j of the three-term recursion x P_j = A P_{j+1} + B P_j + C P_{j-1}.

    Closed forms follow the classical tables; the Jacobi j = 0 row is handled
    separately because the generic denominator degenerates when a + b = 0.
    """
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        s = a + b
        if j == 0:
            return 2.0 / (s + 2.0), (b - a) / (s + 2.0), 0.0
        A = 2.0 * (j + 1) * (j + s + 1) / ((2 * j + s + 1) * (2 * j + s + 2))
        B = (b * b - a * a) / ((2 * j + s) * (2 * j + s + 2))
        C = 2.0 * (j + a) * (j + b) / ((2 * j + s) * (2 * j + s + 1))
        return A, B, C
    if weight.kind == "laguerre":
        a = weight.a
        return -(j + 1.0), 2.0 * j + a + 1.0, -(j + a)
    # gaussian / Hermite
    return 0.5, 0.0, float(j)


def recurrence_row(weight: WeightSpec, j: int) -> tuple[float, float, float]:
    """Table-style triple (Q_{j-1,j}, Q_{j-1,j-1}, Q_{j-1,j-2}) for j >= 1."""
    A, B, C = recurrence_coefficients(weight, j - 1)
    return A, B, C


def _p1(weight: WeightSpec, x: np.ndarray) -> np.ndarray:
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        return 0.5 * (a + b + 2.0) * x + 0.5 * (a - b)
    if weight.kind == "laguerre":
        return -x + weight.a + 1.0
    return 2.0 * x


@dataclass
class OpFamily:
    """A classical orthogonal polynomial family with cached recursion rows."""

    weight: WeightSpec
    max_order: int
    _rows: list[tuple[float, float, float]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.max_order < 0:
            raise OrderRangeError("max_order must be nonnegative")
        self._rows = [recurrence_coefficients(self.weight, j) for j in range(self.max_order + 1)]

    def eval(self, j: int, x) -> np.ndarray:
        return op_eval(self, j, x)

    def eval_all(self, n: int, x) -> np.ndarray:
        return op_eval_all(self, n, x)

    def norm(self, j: int) -> float:
        return op_norm(self, j)

    def log_norm(self, j: int) -> float:
        return op_log_norm(self.weight, j)


def op_eval_all(family: OpFamily, n: int, x) -> np.ndarray:
    """Values of P_0..P_n at x, shape (n+1,) + shape(x)."""
    if n > family.max_order:
        raise OrderRangeError(f"order {n} exceeds max_order {family.max_order}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = _p1(family.weight, x)
    for j in range(1, n):
        A, B, C = family._rows[j]
        out[j + 1] = ((x - B) * out[j] - C * out[j - 1]) / A
    return out


def op_eval(family: OpFamily, j: int, x) -> np.ndarray:
    """Value of the order-j polynomial; exact zero for j < 0."""
    x = np.asarray(x, dtype=float)
    if j < 0:
        return np.zeros_like(x)
    return op_eval_all(family, j, x)[j]


def op_log_norm(weight: WeightSpec, j: int) -> float:
    """log h_j for the Table-1 normalization (always positive norms)."""
    if j < 0:
        raise OrderRangeError("norm undefined for negative order")
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        # written so every factor is positive for all admissible a, b > -1
        # (the tabulated form pairs Gamma(j+a+b+1) with 1/(2j+a+b+1), both of
        # which can go negative for -2 < a+b < -1)
        ratio = 0.0 if j == 0 else np.log(j + a + b + 1.0) - np.log(2.0 * j + a + b + 1.0)
        return (
            (a + b + 1.0) * np.log(2.0)
            + ratio
            + gammaln(j + a + 1.0)
            + gammaln(j + b + 1.0)
            - gammaln(j + 1.0)
            - gammaln(j + a + b + 2.0)
        )
    if weight.kind == "laguerre":
        return gammaln(j + weight.a + 1.0) - gammaln(j + 1.0)
    return 0.5 * np.log(np.pi) + j * np.log(2.0) + gammaln(j + 1.0)


def op_norm(family: OpFamily, j: int) -> float:
    """h_j = integral of P_j^2 against the weight."""
    return float(np.exp(op_log_norm(family.weight, j)))


def leading_coefficient(weight: WeightSpec, j: int) -> float:
    """k_j^{(j)}, the coefficient of x^j (signed, log-domain internally)."""
    if j < 0:
        raise OrderRangeError("leading coefficient undefined for negative order")
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        log_k = (
            -j * np.log(2.0)
            + gammaln(2 * j + a + b + 1.0)
            - gammaln(j + 1.0)
            - gammaln(j + a + b + 1.0)
        )
        return float(np.exp(log_k))
    if weight.kind == "laguerre":
        return float((-1.0) ** j * np.exp(-gammaln(j + 1.0)))
    return float(2.0**j)


def derivative_constant_A(weight: WeightSpec, j: int) -> float:
    """A_j in the weighted-derivative identity for the shifted OP basis."""
    if j < 0:
        return 0.0
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        return -j * (j + 2 * a + 2 * b + 2.0) / (2 * j + 2 * a + 2 * b + 1.0)
    if weight.kind == "laguerre":
        return float(j)
    raise ParameterDomainError("derivative constants A/B are defined for Jacobi and Laguerre")


def derivative_constant_B(weight: WeightSpec, j: int) -> float:
    """B_j in the weighted-derivative identity; B_{-l} = 0 for l >= 1."""
    if j < 0:
        return 0.0
    if weight.kind == "jacobi":
        a, b = weight.a, weight.b
        return -(j + 2 * a + 2.0) * (j + 2 * b + 2.0) / (2 * j + 2 * a + 2 * b + 5.0)
    if weight.kind == "laguerre":
        return j + 2 * weight.a + 2.0
    raise ParameterDomainError("derivative constants A/B are defined for Jacobi and Laguerre")


def op_weighted_derivative(weight: WeightSpec, variant: str, j: int, x) -> np.ndarray:
    """d/dx of the weighted polynomial via the closed recursion identity.

    variant "jacobi-shift":   d/dx [ w_{a+1,b+1} P_j^{2a+1,2b+1} ]
                              = w_{a,b} (A_{j+1} P_{j+1} - B_{j-1} P_{j-1})
    variant "laguerre-shift": d/dx [ w_{a+1}(x) L_j^{2a+1}(2x) ]
                              = w_a(x)/2 (A_{j+1} L_{j+1} - B_{j-1} L_{j-1})(2x)
    variant "hermite":        d/dx [ e^{-x^2/2} H_j ]
                              = e^{-x^2/2} (-H_{j+1}/2 + j H_{j-1})

    Never evaluated by numerical differencing.
    """
    x = np.asarray(x, dtype=float)
    if variant == "jacobi-shift":
        if weight.kind != "jacobi":
            raise ParameterDomainError("jacobi-shift variant needs a Jacobi weight")
        shifted = OpFamily(WeightSpec("jacobi", 2 * weight.a + 1, 2 * weight.b + 1), j + 1)
        vals = shifted.eval_all(j + 1, x)
        pjm1 = vals[j - 1] if j >= 1 else np.zeros_like(x)
        wab = weight.value(x)
        return wab * (
            derivative_constant_A(weight, j + 1) * vals[j + 1]
            - derivative_constant_B(weight, j - 1) * pjm1
        )
    if variant == "laguerre-shift":
        if weight.kind != "laguerre":
            raise ParameterDomainError("laguerre-shift variant needs a Laguerre weight")
        shifted = OpFamily(WeightSpec("laguerre", 2 * weight.a + 1), j + 1)
        vals = shifted.eval_all(j + 1, 2.0 * x)
        ljm1 = vals[j - 1] if j >= 1 else np.zeros_like(x)
        wa = weight.value(x)
        return 0.5 * wa * (
            derivative_constant_A(weight, j + 1) * vals[j + 1]
            - derivative_constant_B(weight, j - 1) * ljm1
        )
    if variant == "hermite":
        fam = OpFamily(WeightSpec("gaussian"), j + 1)
        vals = fam.eval_all(j + 1, x)
        hjm1 = vals[j - 1] if j >= 1 else np.zeros_like(x)
        return np.exp(-0.5 * x * x) * (-0.5 * vals[j + 1] + j * hjm1)
    raise ValueError(f"unknown weighted-derivative variant {variant!r}")
