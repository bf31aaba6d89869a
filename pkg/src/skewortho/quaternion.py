"""Banded quaternion matrices P, R for the skew-orthogonal recursions.

The recursions read f(x) Psi = P Phi and x f(x) Psi = R Phi for beta = 4
(Phi and Psi swap roles for beta = 1), with P, R block-tridiagonal in the
2x2 quaternion sense and anti-self-dual: A = -A^D, A^D = -Z A^t Z.

Band entries are produced two ways: quadrature extraction through the
family's skew scalar products, and the closed forms the paper lists for
specific (weight, beta) pairs.  The two must agree entrywise; the tests use
that as a cross oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classical import recurrence_coefficients
from .quadrature import gauss_rule
from .sop import ConfigurationError, SopFamily
from .weights import WeightSpec

__all__ = [
    "QuaternionBandMatrix",
    "BoundaryBlockError",
    "dual",
    "extract_band",
    "closed_form_band",
    "recursion_residual",
]

_Z2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class BoundaryBlockError(ValueError):
    """Raised when a recursion residual touches a truncation-boundary block."""


@dataclass
class QuaternionBandMatrix:
    """Map (block-row, block-col) -> 2x2 real matrix, plus band metadata."""

    blocks: dict[tuple[int, int], np.ndarray]
    block_bandwidth: int
    truncation_order: int
    scale: float = field(default=1.0)  # typical block magnitude, set by builders

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks.get((i, j), np.zeros((2, 2)))

    def entry(self, row: int, col: int) -> float:
        """Scalar entry by global index (row = 2*block + offset)."""
        blk = self.block(row // 2, col // 2)
        return float(blk[row % 2, col % 2])

    def snapped(self, rel: float = 1e-12) -> "QuaternionBandMatrix":
        """Zero out entries below rel * (overall max-norm) for sparsity tests."""
        mx = max((np.abs(b).max() for b in self.blocks.values()), default=0.0)
        out = {}
        for key, b in self.blocks.items():
            bb = b.copy()
            bb[np.abs(bb) < rel * mx] = 0.0
            if np.any(bb != 0.0):
                out[key] = bb
        return QuaternionBandMatrix(out, self.block_bandwidth, self.truncation_order, mx)


def dual(A: QuaternionBandMatrix) -> QuaternionBandMatrix:
    """A^D = -Z A^t Z, blockwise: (A^D)_{ij} = -z A_{ji}^t z."""
    out = {}
    for (i, j), b in A.blocks.items():
        out[(j, i)] = -_Z2 @ b.T @ _Z2
    return QuaternionBandMatrix(out, A.block_bandwidth, A.truncation_order, A.scale)


def _band_quadrature(family: SopFamily, n_points: int):
    """Node/weight/inverse-envelope triple making band integrands exact.

    Every band scalar-product integrand factors as E(x) * polynomial, where
    the envelope E carries the family's minimal endpoint exponents (the
    logarithmic-derivative terms of sqrt-weight psi functions lower the
    exponents by one).  A Gauss rule for E therefore integrates the product
    exactly; the integrand is divided by E pointwise, in the log domain.
    """
    w = family.weight
    kind = w.kind
    sqrt_conv = family.convention == "sqrt-weight"
    if kind == "gaussian":
        rule = gauss_rule(WeightSpec("gaussian"), n_points)
        x = rule.nodes
        return x, rule.weights, np.exp(x * x)
    if kind == "laguerre":
        a = w.a
        if sqrt_conv:
            a_env = a - 1.0 if a > 0 else a + 1.0
            rule = gauss_rule(WeightSpec("laguerre", a_env), n_points)
            x = rule.nodes
            log_env = a_env * np.log(x) - x
            return x, rule.weights, np.exp(-log_env)
        # full-weight products carry x^{2a+1} e^{-2x}; substitute t = 2x
        rule = gauss_rule(WeightSpec("laguerre", 2 * a + 1.0), n_points)
        x = rule.nodes / 2.0
        wts = rule.weights * 2.0 ** (-(2 * a + 2.0))
        log_env = (2 * a + 1.0) * np.log(x) - 2.0 * x
        return x, wts, np.exp(-log_env)
    a, b = w.a, w.b
    if sqrt_conv:
        a_env = a - 1.0 if a > 0 else a + 1.0
        b_env = b - 1.0 if b > 0 else b + 1.0
    elif family.beta == 4:
        # full-weight beta=4 Jacobi: psi carries w' terms unless a = b = 0
        a_env = 2 * a - 1.0 if a > 0 else 2 * a + 1.0
        b_env = 2 * b - 1.0 if b > 0 else 2 * b + 1.0
    else:
        a_env, b_env = 2 * a + 1.0, 2 * b + 1.0
    rule = gauss_rule(WeightSpec("jacobi", a_env, b_env), n_points)
    x = rule.nodes
    log_env = a_env * np.log1p(-x) + b_env * np.log1p(x)
    return x, rule.weights, np.exp(-log_env)


def _scalar_product_matrix(family: SopFamily, with_x: bool, n_scalars: int) -> np.ndarray:
    """Matrix of skew scalar products that encode the band coefficients.

    beta = 1:  M_{nm} = int f phi_n phi_m dx          (f or x f)
    beta = 4:  M_{nm} = 2 int f psi_n psi_m dx        (antisymmetrized product)
    """
    x, w, inv_env = _band_quadrature(family, n_scalars + 8)
    f = family.weight.band_multiplier(x)
    if with_x:
        f = f * x
    if family.beta == 1:
        tab = family.phi_all(x)[:n_scalars]
        return (tab * (w * f * inv_env)) @ tab.T
    tab = family.psi_all(x)[:n_scalars]
    return 2.0 * (tab * (w * f * inv_env)) @ tab.T


def extract_band(
    family: SopFamily,
    which: str,
    truncation_order: int | None = None,
    probe_bandwidth: int = 3,
) -> QuaternionBandMatrix:
    """Band entries from skew scalar products, by quadrature.

    All blocks with |block-row - block-col| <= probe_bandwidth are stored, so
    callers can verify that out-of-band blocks vanish.
    """
    if which not in ("P", "R"):
        raise ValueError("which must be 'P' or 'R'")
    if truncation_order is None:
        truncation_order = family.max_order // 2 - 1
    n_scalars = 2 * truncation_order + 2
    if n_scalars > family.max_order + 1:
        raise ConfigurationError(
            f"truncation_order {truncation_order} needs family max_order >= {n_scalars - 1}"
        )
    M = _scalar_product_matrix(family, which == "R", n_scalars)
    # f Psi = P Phi paired against the dual basis gives M = +-pf * P Z,
    # hence P = -+ (1/pf) M Z; the beta cases come out with opposite signs.
    MZ = np.empty_like(M)
    MZ[:, 0::2] = -M[:, 1::2]
    MZ[:, 1::2] = M[:, 0::2]
    coeff = MZ if family.beta == 1 else -MZ / family.pairing_factor
    blocks = {}
    nblocks = truncation_order + 1
    for i in range(nblocks):
        for j in range(max(0, i - probe_bandwidth), min(nblocks, i + probe_bandwidth + 1)):
            blocks[(i, j)] = coeff[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].copy()
    scale = float(np.abs(coeff).max())
    return QuaternionBandMatrix(blocks, 1, nblocks, scale)


def _g_ratio(family: SopFamily, m: int) -> float:
    """sqrt(g_{2m+2} / g_{2m}); pair norms share signs, so the ratio is > 0."""
    return float(np.exp(0.5 * (family.log_abs_g[2 * m + 2] - family.log_abs_g[2 * m])))


def closed_form_band(family: SopFamily, which: str) -> QuaternionBandMatrix:
    """Superdiagonal band blocks from the paper's closed forms.

    Defined for beta=1 Jacobi and Laguerre (full-weight) and for the
    sqrt-weight beta=4 Laguerre family; for sqrt-weight beta=4 Jacobi only
    the P entry has an exact closed form (the R entries are only known to
    leading order and must come from extract_band).  Gaussian band entries
    are not given in closed form at all.  Subdiagonal blocks are filled via
    anti-self-duality; diagonal blocks are not populated.
    """
    if which not in ("P", "R"):
        raise ValueError("which must be 'P' or 'R'")
    w = family.weight
    nblocks = family.max_order // 2 - 1
    blocks: dict[tuple[int, int], np.ndarray] = {}

    def member_sign(idx: int) -> float:
        # the even pair member carries sign(g) in this package's real-valued
        # normalization; band entries pick up the row and column signs
        return float(family.sign_g[idx]) if idx % 2 == 0 else 1.0

    def put_upper(m: int, b: np.ndarray) -> None:
        signed = b.copy()
        for r in range(2):
            for c in range(2):
                signed[r, c] *= member_sign(2 * m + r) * member_sign(2 * m + 2 + c)
        blocks[(m, m + 1)] = signed
        blocks[(m + 1, m)] = -_Z2 @ signed.T @ _Z2  # A = -A^D fixes the mirror block

    if family.beta == 1 and w.kind == "jacobi":
        a, b = w.a, w.b
        for m in range(nblocks - 1):
            r = _g_ratio(family, m)
            num = (2 * m + 1) * (2 * m + 2) * (2 * m + 2 * a + 2 * b + 3) * (2 * m + 2 * a + 2 * b + 4)
            d3 = 4 * m + 2 * a + 2 * b + 3.0
            d4 = 4 * m + 2 * a + 2 * b + 4.0
            d5 = 4 * m + 2 * a + 2 * b + 5.0
            d6 = 4 * m + 2 * a + 2 * b + 6.0
            if which == "P":
                up = np.zeros((2, 2))
                up[1, 0] = r * num / (d3 * d5)
            else:
                up = np.zeros((2, 2))
                up[0, 0] = -2.0 * r * num / (d3 * d4 * d5)
                up[1, 0] = r * ((2 * b + 1) ** 2 - (2 * a + 1) ** 2) * num / (d3 * d4 * d5 * d6)
                up[1, 1] = -2.0 * r * num / (d3 * d5 * d6)
            put_upper(m, up)
    elif family.beta == 1 and w.kind == "laguerre":
        a = w.a
        for m in range(nblocks - 1):
            r = _g_ratio(family, m)
            if which == "P":
                up = np.zeros((2, 2))
                up[1, 0] = 0.5 * r * (2 * m + 1) * (2 * m + 2)
            else:
                up = np.zeros((2, 2))
                up[0, 0] = -0.5 * r * (m + 1) * (2 * m + 1)
                up[1, 0] = 0.5 * r * (m + 1) * (2 * m + 1) * (4 * m + 2 * a + 4)
                up[1, 1] = -0.5 * r * (m + 1) * (2 * m + 1)
            put_upper(m, up)
    elif family.beta == 4 and w.kind == "laguerre" and family.convention == "sqrt-weight":
        a = w.a
        for m in range(nblocks - 1):
            r = _g_ratio(family, m)
            if which == "P":
                up = np.zeros((2, 2))
                up[1, 0] = r * (m + 1)
            else:
                up = np.zeros((2, 2))
                up[0, 0] = -r * (m + 1) * (2 * m + 1)
                up[1, 0] = r * (m + 1) * (4 * m + a + 4)
                up[1, 1] = -r * (m + 1) * (2 * m + 3)
            put_upper(m, up)
    elif family.beta == 4 and w.kind == "jacobi" and family.convention == "sqrt-weight":
        if which == "R":
            raise ConfigurationError(
                "beta=4 Jacobi R entries are only known to leading order; use extract_band"
            )
        if w.a + w.b != 0.0:
            # the printed P entry drops a (a+b)/2 term; it is exact only on
            # the a+b=0 line (checked against extraction)
            raise ConfigurationError(
                "beta=4 Jacobi closed-form P entry is exact only for a+b=0; use extract_band"
            )
        a, b = w.a, w.b
        for m in range(nblocks - 1):
            r = _g_ratio(family, m)
            q1 = recurrence_coefficients(w, 2 * m)[0]      # Q_{2m,2m+1}
            q2 = recurrence_coefficients(w, 2 * m + 1)[0]  # Q_{2m+1,2m+2}
            j = 2 * m + 2
            D = (j + a + b) * (j + a + b - 1.0) / ((2 * j + a + b) * (2 * j + a + b - 1.0))
            up = np.zeros((2, 2))
            up[1, 0] = -r * (2 * m + a + b + 1.0) * q1 * q2 / (2.0 * D)
            put_upper(m, up)
    else:
        raise ConfigurationError(
            f"no closed-form bands for beta={family.beta} {w.kind} ({family.convention})"
        )

    scale = max((np.abs(bb).max() for bb in blocks.values()), default=1.0)
    return QuaternionBandMatrix(blocks, 1, nblocks, float(scale))


def recursion_residual(
    family: SopFamily,
    P: QuaternionBandMatrix,
    R: QuaternionBandMatrix,
    n: int,
    x: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the quaternion three-term recursions at block order n.

    beta=4: f Psi_n - sum_k P_{n,k} Phi_k  and the x f / R twin;
    beta=1: Phi and Psi swap roles.  Both 2-vectors vanish for exact bands.
    """
    if n < 1 or n + 1 >= min(P.truncation_order, R.truncation_order):
        raise BoundaryBlockError(
            f"block order {n} touches the truncation boundary; stay interior"
        )
    xa = np.asarray([x], dtype=float)
    fx = float(family.weight.band_multiplier(xa)[0])
    phi, psi = family.phi_psi_all(xa)
    blocks = [np.array([phi[2 * k, 0], phi[2 * k + 1, 0]]) for k in range(n + 2)]
    dual_blocks = [np.array([psi[2 * k, 0], psi[2 * k + 1, 0]]) for k in range(n + 2)]
    if family.beta == 1:
        blocks, dual_blocks = dual_blocks, blocks
    lhs_p = fx * dual_blocks[n]
    lhs_r = x * fx * dual_blocks[n]
    rhs_p = np.zeros(2)
    rhs_r = np.zeros(2)
    for k in (n - 1, n, n + 1):
        rhs_p = rhs_p + P.block(n, k) @ blocks[k]
        rhs_r = rhs_r + R.block(n, k) @ blocks[k]
    return lhs_p - rhs_p, lhs_r - rhs_r
