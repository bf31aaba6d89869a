"""Classical weight functions and their parameter domains.

Three weights are supported: Jacobi ``(1-x)^a (1+x)^b`` on ``[-1, 1]``,
associated Laguerre ``x^a e^{-x}`` on ``[0, inf)``, and Gaussian ``e^{-x^2}``
on the real line.  Parameters must satisfy ``a > -1`` (and ``b > -1`` for
Jacobi) so that all moments are finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["WeightSpec", "ParameterDomainError", "jacobi", "laguerre", "gaussian"]


class ParameterDomainError(ValueError):
    """Raised for weight parameters outside the admissible domain."""


@dataclass(frozen=True)
class WeightSpec:
    """A classical weight: which family plus its exponent parameters.

    ``a`` is unused for the Gaussian weight; ``b`` only applies to Jacobi.
    """

    kind: str  # "jacobi" | "laguerre" | "gaussian"
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("jacobi", "laguerre", "gaussian"):
            raise ParameterDomainError(f"unknown weight kind {self.kind!r}")
        if self.kind == "jacobi" and (self.a <= -1.0 or self.b <= -1.0):
            raise ParameterDomainError(
                f"Jacobi weight needs a, b > -1, got a={self.a}, b={self.b}"
            )
        if self.kind == "laguerre" and self.a <= -1.0:
            raise ParameterDomainError(f"Laguerre weight needs a > -1, got a={self.a}")

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "jacobi":
            return (-1.0, 1.0)
        if self.kind == "laguerre":
            return (0.0, np.inf)
        return (-np.inf, np.inf)

    @property
    def is_finite_support(self) -> bool:
        lo, hi = self.support
        return np.isfinite(lo) and np.isfinite(hi)

    def value(self, x):
        """Weight w(x), vectorized."""
        x = np.asarray(x, dtype=float)
        if self.kind == "jacobi":
            return (1.0 - x) ** self.a * (1.0 + x) ** self.b
        if self.kind == "laguerre":
            return np.where(x > 0, x, 1.0) ** self.a * np.exp(-x) * (x >= 0)
        return np.exp(-x * x)

    def log_value(self, x):
        """log w(x); -inf outside the support interior."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "jacobi":
                return self.a * np.log(1.0 - x) + self.b * np.log(1.0 + x)
            if self.kind == "laguerre":
                return self.a * np.log(x) - x
            return -x * x

    def dlog_value(self, x):
        """Logarithmic derivative w'(x)/w(x) on the open support."""
        x = np.asarray(x, dtype=float)
        if self.kind == "jacobi":
            return -self.a / (1.0 - x) + self.b / (1.0 + x)
        if self.kind == "laguerre":
            return self.a / x - 1.0
        return -2.0 * x

    def band_multiplier(self, x):
        """f(x) that clears the w'/w poles in the quaternion recursions.

        Jacobi: 1 - x^2; Laguerre: x; Gaussian: 1.
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "jacobi":
            return 1.0 - x * x
        if self.kind == "laguerre":
            return x
        return np.ones_like(x)

    def shifted(self, da: float = 0.0, db: float = 0.0) -> "WeightSpec":
        """Same family with exponents shifted by (da, db)."""
        if self.kind == "gaussian":
            return self
        return WeightSpec(self.kind, self.a + da, self.b + db)


def jacobi(a: float, b: float) -> WeightSpec:
    return WeightSpec("jacobi", a, b)


def laguerre(a: float) -> WeightSpec:
    return WeightSpec("laguerre", a)


def gaussian() -> WeightSpec:
    return WeightSpec("gaussian")
