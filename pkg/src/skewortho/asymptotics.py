"""Large-order asymptotic predictors: Plancherel-Rotach forms for the
classical polynomials, their skew-orthogonal descendants, smooth bulk level
densities, and the universal sine kernels.

Each formula is the leading oscillatory term in an angle parametrization of
the bulk (x = cos(theta) for Jacobi, x = (4j + 2a + 2) cos^2(theta) for
Laguerre, x = sqrt(2j + 1) cos(theta) for Hermite), valid a fixed margin
away from the window edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import op_log_norm
from .weights import WeightSpec

__all__ = [
    "AsymptoticContext",
    "ValidityWindowError",
    "OutsideBulkError",
    "op_asymptotic",
    "sop_asymptotic",
    "predicted_density",
    "sine_kernel",
]


class ValidityWindowError(ValueError):
    """The angle variable fell outside the asymptotic validity window."""


class OutsideBulkError(ValueError):
    """x outside the open bulk on which the density formula holds."""


@dataclass(frozen=True)
class AsymptoticContext:
    """Weight, symmetry class, and half-dimension for the predictors."""

    weight: WeightSpec
    beta: int = 1
    N: int = 50
    epsilon_margin: float = 0.15


def _theta_jacobi(x: float, margin: float) -> float:
    if not -1.0 < x < 1.0:
        raise ValidityWindowError(f"x={x} outside (-1, 1)")
    theta = float(np.arccos(x))
    if not margin <= theta <= np.pi - margin:
        raise ValidityWindowError(f"theta={theta:.3f} outside [{margin}, pi - {margin}]")
    return theta


def _theta_laguerre(x: float, scale: float, j: int, margin: float) -> float:
    if not 0.0 < x < scale:
        raise ValidityWindowError(f"x={x} outside (0, {scale})")
    theta = float(np.arccos(np.sqrt(x / scale)))
    hi = np.pi / 2 - margin / np.sqrt(max(j, 1))
    if not margin <= theta <= hi:
        raise ValidityWindowError(f"theta={theta:.3f} outside [{margin}, {hi:.3f}]")
    return theta


def op_asymptotic(ctx: AsymptoticContext, family: str, j: int, x: float) -> float:
    """Leading Plancherel-Rotach value of the weighted classical polynomial.

    Returns the quantity each classical asymptotic formula is written for:
    h_j^{-1/2} w^{1/2} P_j for Jacobi, e^{-x/2} L_j^{(a)}(x) for Laguerre,
    and e^{-x^2/2} H_j(x) for Hermite.
    """
    m = ctx.epsilon_margin
    if family == "jacobi":
        a, b = ctx.weight.a, ctx.weight.b
        theta = _theta_jacobi(x, m)
        phase = (j + 0.5 * (a + b + 1.0)) * theta - (a + 0.5) * np.pi / 2.0
        return float(np.sqrt(2.0 / (np.pi * np.sin(theta))) * np.cos(phase))
    if family == "laguerre":
        a = ctx.weight.a
        scale = 4.0 * j + 2.0 * a + 2.0
        theta = _theta_laguerre(x, scale, j, m)
        s, c = np.sin(theta), np.cos(theta)
        amp = (-1.0) ** j / np.sqrt(2.0 * np.pi * j * s * c) * (j / x) ** (a / 2.0)
        phase = (j + 0.5 * (a + 1.0)) * (np.sin(2 * theta) - 2 * theta) + 0.75 * np.pi
        return float(amp * np.sin(phase))
    if family == "hermite":
        scale = np.sqrt(2.0 * j + 1.0)
        if not -scale < x < scale:
            raise ValidityWindowError(f"x={x} outside (-{scale:.2f}, {scale:.2f})")
        theta = float(np.arccos(x / scale))
        if not m <= theta <= np.pi - m:
            raise ValidityWindowError(f"theta={theta:.3f} outside the window")
        amp = np.exp(0.5 * op_log_norm(WeightSpec("gaussian"), j)) / np.sqrt(
            np.pi * np.sin(theta)
        ) * (2.0 / j) ** 0.25
        phase = (0.5 * j + 0.25) * (np.sin(2 * theta) - 2 * theta) + 0.75 * np.pi
        return float(amp * np.sin(phase))
    raise ValueError(f"unknown family {family!r}")


def sop_asymptotic(ctx: AsymptoticContext, n: int, kind: str, x: float) -> float:
    """Leading asymptotic value of the normalized phi_n or psi_n.

    Values follow this package's normalization (pair sign on even members
    for negative-norm families).  Orders below 20 are refused: the leading
    term is not meaningful there.
    """
    if kind not in ("phi", "psi"):
        raise ValueError("kind must be 'phi' or 'psi'")
    if n < 20:
        raise ValidityWindowError("sop_asymptotic needs order n >= 20")
    m_ = ctx.epsilon_margin
    mm = n // 2
    even = n % 2 == 0
    w = ctx.weight

    if ctx.beta == 1 and w.kind == "jacobi":
        a, b = w.a, w.b
        theta = _theta_jacobi(x, m_)
        s = np.sin(theta)
        F = (2 * mm + a + b + 1.5) * theta - (2 * a + 1.5) * np.pi / 2.0
        if kind == "psi" and not even:
            return float(np.sqrt(2.0 * s / np.pi) * np.cos(F))
        if kind == "psi":
            return float(-np.sin(F) / (mm * np.sqrt(2.0 * np.pi * s)))
        if not even:
            return float(2.0 * mm * np.sqrt(2.0 / (np.pi * s)) * np.sin(F))
        return float(np.sqrt(2.0 / (np.pi * s**3)) * np.cos(F))

    if ctx.beta == 1 and w.kind == "laguerre":
        a = w.a
        scale = (8 * mm + 4 * a + 4.0) / 2.0  # 2x = (8m + 4a + 4) cos^2
        theta = _theta_laguerre(x, scale, 2 * mm, m_)
        s, c = np.sin(theta), np.cos(theta)
        F = (2 * mm + a + 1.0) * (np.sin(2 * theta) - 2 * theta) + 0.75 * np.pi
        if kind == "phi" and even:
            return float(np.sin(F) / (4.0 * mm * np.sqrt(np.pi * s * c**3)))
        if kind == "psi" and not even:
            return float(2.0 / np.sqrt(np.pi * np.tan(theta)) * np.sin(F))
        if kind == "psi":
            return float(-np.cos(F) / (4.0 * mm * np.sqrt(np.pi * s**3 * c)))
        return float(2.0 * np.sqrt(np.tan(theta) / np.pi) * np.cos(F))

    if ctx.beta == 4 and w.kind == "jacobi":
        a, b = w.a, w.b
        theta = _theta_jacobi(x, m_)
        s = np.sin(theta)
        F = (2 * mm + 0.5 * (a + b + 1.0)) * theta - (a + 0.5) * np.pi / 2.0
        if kind == "phi" and not even:
            return float(-np.sqrt(s / (np.pi * mm)) * np.sin(F))
        if kind == "phi":
            return float(0.5 * (np.cos(F) / np.sqrt(np.pi * mm * s) + 1.0))
        if not even:
            return float(2.0 * np.sqrt(mm / (np.pi * s)) * np.cos(F))
        return float(np.sqrt(mm / (np.pi * s**3)) * (np.sin(F) + 1.0))

    if ctx.beta == 4 and w.kind == "laguerre":
        a = w.a
        scale = 8 * mm + 2 * a + 4.0
        theta = _theta_laguerre(x, scale, 2 * mm, m_)
        s, c = np.sin(theta), np.cos(theta)
        F = (2 * mm + 1.0 + 0.5 * a) * (np.sin(2 * theta) - 2 * theta) + 0.75 * np.pi
        amp = (2.0 * mm) ** (a / 2.0)
        # unnormalized values; this family's norms are negative, so the
        # normalized even member carries sign(g) = -1
        if kind == "phi" and even:
            unnorm = -0.5 * amp * (np.cos(F) / (2.0 * np.sqrt(np.pi * mm * c * s**3)) + 1.0)
        elif kind == "phi":
            unnorm = amp / np.sqrt(mm * np.pi * np.tan(theta)) * np.sin(F)
        elif even:
            unnorm = amp * np.sin(F) / (8.0 * np.sqrt(np.pi * mm * c**3 * s))
        else:
            unnorm = amp * 0.5 * np.sqrt(np.tan(theta) / (mm * np.pi)) * np.cos(F)
        log_g = op_log_norm(w, 2 * mm)
        sign = -1.0 if even else 1.0
        return float(sign * unnorm * np.exp(-0.5 * log_g))

    raise ValueError(f"no SOP asymptotics for beta={ctx.beta}, weight {w.kind}")


def predicted_density(ctx: AsymptoticContext, x: float) -> float:
    """Smooth bulk level density for the four (weight, beta) cases.

    The beta=4 forms integrate to N (Kramers pairs counted once); the beta=1
    forms integrate to 2N.
    """
    N = ctx.N
    kind = ctx.weight.kind
    if kind == "jacobi":
        if not -1.0 < x < 1.0:
            raise OutsideBulkError(f"x={x} outside (-1, 1)")
        root = np.sqrt(1.0 - x * x)
        return float(2.0 * N / (np.pi * root)) if ctx.beta == 1 else float(N / (np.pi * root))
    if kind == "laguerre":
        if ctx.beta == 1:
            if not 0.0 < x < 4.0 * N:
                raise OutsideBulkError(f"x={x} outside (0, {4 * N})")
            return float(np.sqrt((4.0 * N - x) / x) / np.pi)
        if not 0.0 < x < 8.0 * N:
            raise OutsideBulkError(f"x={x} outside (0, {8 * N})")
        return float(np.sqrt((8.0 * N - x) / x) / (4.0 * np.pi))
    raise OutsideBulkError("no closed-form bulk density for the Gaussian weight here")


def sine_kernel(beta: int, r: float) -> float:
    """Universal unfolded kernel: sin(pi r)/(pi r), or sin(2 pi r)/(2 pi r)."""
    if beta not in (1, 4):
        raise ValueError("beta must be 1 or 4")
    if r == 0.0:
        return 1.0
    t = np.pi * r if beta == 1 else 2.0 * np.pi * r
    return float(np.sin(t) / t)
