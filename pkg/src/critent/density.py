"""Density-matrix algebra and information measures.

Entropies are in classical bits (base-2 logarithms) throughout.  A
DensityMatrix is a validated Hermitian, unit-trace, positive-semidefinite
matrix together with the ordered subsystem dimensions whose product is its
size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import ValidationError
from .numerics import hermitian_eigenvalues

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
NEGATIVITY_REJECT = 1e-10  # eigenvalues below -this are construction bugs
NEGATIVITY_CLIP = 1e-12    # eigenvalues in [-this, 0) are numerical dust
MI_SNAP = 1e-9             # mutual information in [-this, 0) reports as 0
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def make_density_matrix(matrix, dims) -> DensityMatrix:
    """Validated constructor.

    Checks unit trace, Hermiticity and positivity; eigenvalues in
    [-1e-12, 0) are clipped to zero and the spectrum renormalized to unit
    sum.  Anything below -1e-10 is rejected rather than silently fixed.
    """
    matrix = np.asarray(matrix, dtype=complex)
    dims = tuple(int(d) for d in dims)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError("shape", "matrix must be square")
    if any(d < 1 for d in dims) or math.prod(dims) != matrix.shape[0]:
        raise ValidationError(
            "dims", f"product of {dims} must equal dimension {matrix.shape[0]}"
        )
    tr = np.trace(matrix)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError("unit trace", f"trace = {tr:.12g}")
    herm = np.max(np.abs(matrix - matrix.conj().T))
    if herm > HERM_TOL:
        raise ValidationError("hermitian", f"residual {herm:.3e}")
    sym = (matrix + matrix.conj().T) / 2.0
    w, v = np.linalg.eigh(sym)
    if w[0] < -NEGATIVITY_REJECT:
        raise ValidationError(
            "positive semidefinite", f"smallest eigenvalue {w[0]:.3e}"
        )
    w = np.where((w < 0) & (w >= -NEGATIVITY_CLIP), 0.0, w)
    w = w / w.sum()
    out = (v * w) @ v.conj().T
    out = (out + out.conj().T) / 2.0
    return DensityMatrix(out, dims)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum p log2 p over the spectrum, with 0 log 0 = 0.  In bits."""
    p = np.clip(hermitian_eigenvalues(rho.matrix), 0.0, None)
    return float(-np.sum(xlogy(p, p)) / math.log(2.0))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems in `keep` (original order kept)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep {keep} outside subsystem range 0..{n - 1}")
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    # same einsum letter on the ket/bra axes of each traced subsystem
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    ket = list(letters[:n])
    bra = [
        ket[i] if i not in keep else letters[n + keep.index(i)]
        for i in range(n)
    ]
    out = "".join(ket[i] for i in keep) + "".join(bra[i] for i in keep)
    reduced = np.einsum("".join(ket) + "".join(bra) + "->" + out, tensor)
    kept_dims = tuple(rho.dims[i] for i in keep)
    d = math.prod(kept_dims)
    return make_density_matrix(reduced.reshape(d, d), kept_dims)


def tensor_product(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    """Kronecker product state; subsystem dims are concatenated."""
    return make_density_matrix(
        np.kron(rho_a.matrix, rho_b.matrix), rho_a.dims + rho_b.dims
    )


def mutual_information(rho: DensityMatrix) -> float:
    """S(A) + S(B) - S(AB) for a bipartite state, in bits.

    Rounding dust in [-1e-9, 0) is snapped to 0 so downstream fits never
    see a negative value.
    """
    if len(rho.dims) != 2:
        raise ValueError("mutual_information needs exactly two subsystems")
    s_a = von_neumann_entropy(partial_trace(rho, {0}))
    s_b = von_neumann_entropy(partial_trace(rho, {1}))
    s_ab = von_neumann_entropy(rho)
    mi = s_a + s_b - s_ab
    if -MI_SNAP <= mi < 0.0:
        return 0.0
    return float(mi)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """tr(rho log2 rho) - tr(rho log2 sigma), computed in sigma's eigenbasis.

    Returns math.inf when rho has weight outside sigma's support (an
    infinite-divergence signal, not an error).
    """
    if rho.dim != sigma.dim:
        raise ValueError("states must have equal dimension")
    p = np.clip(hermitian_eigenvalues(rho.matrix), 0.0, None)
    s, v = np.linalg.eigh(sigma.matrix)
    s = np.clip(s, 0.0, None)
    diag = np.real(np.einsum("ij,jk,ki->i", v.conj().T, rho.matrix, v))
    outside = s <= SUPPORT_TOL
    if np.any(diag[outside] > SUPPORT_TOL):
        return math.inf
    tr_rho_log_rho = np.sum(xlogy(p, p))
    tr_rho_log_sigma = np.sum(diag[~outside] * np.log(s[~outside]))
    return float((tr_rho_log_rho - tr_rho_log_sigma) / math.log(2.0))


def random_density_matrix(dims, rng: np.random.Generator) -> DensityMatrix:
    """Random state: uniform-simplex spectrum conjugated by a Haar unitary.

    `dims` may be an int (single subsystem) or a tuple of subsystem
    dimensions.
    """
    dims = (int(dims),) if np.isscalar(dims) else tuple(int(d) for d in dims)
    dim = math.prod(dims)
    spectrum = rng.dirichlet(np.ones(dim))
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return make_density_matrix((q * spectrum) @ q.conj().T, dims)
