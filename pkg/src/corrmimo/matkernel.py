"""Small dense complex linear algebra on Hermitian positive-definite matrices.

Every routine accepts a single matrix of shape ``(n, n)`` or a stack of shape
``(..., n, n)`` and works elementwise over the leading axes, so a whole
Monte Carlo ensemble can be factorised in one call. The loops run over the
matrix dimension only (n <= 32 here) and use plain multiply/sum reductions
rather than BLAS calls, which keeps results bit-identical no matter how a
batch is split into chunks.
"""

import numpy as np

from .errors import NonRealDiagonal, NotPositiveDefinite

# Named tolerances. Tests cite these directly.
HERMITIAN_TOL = 1e-10
PIVOT_REL_TOL = 1e-12
CHOLESKY_RECON_TOL = 1e-9
INVERSE_TOL = 1e-8
IMAG_DIAG_TOL = 1e-10


def hermitian_part(A):
    A = np.asarray(A)
    return 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))


def is_hermitian(A, tol=HERMITIAN_TOL):
    A = np.asarray(A)
    if A.shape[-1] != A.shape[-2]:
        return False
    return bool(np.all(np.abs(A - np.conj(np.swapaxes(A, -1, -2))) <= tol))


def herm_gram(H):
    """Return ``H^H H`` (cols x cols), symmetrised to be exactly Hermitian.

    >>> herm_gram(np.array([[3.0], [4.0]]))
    array([[25.]])
    """
    H = np.asarray(H)
    if H.ndim < 2:
        raise ValueError("H must have at least two dimensions")
    Hh = np.conj(np.swapaxes(H, -1, -2))
    # (cols x rows) @ (rows x cols) written as a broadcast product so every
    # element is a single ordered sum.
    A = (Hh[..., :, :, None] * H[..., None, :, :]).sum(axis=-2)
    A = hermitian_part(A)
    # symmetrisation leaves -0j style residue on the diagonal; make it exact
    idx = np.arange(A.shape[-1])
    A[..., idx, idx] = A[..., idx, idx].real
    return A


def _cholesky(A):
    """Batched lower Cholesky factor plus a boolean mask of failed matrices.

    Failed entries of ``L`` are filled with NaN.
    """
    A = np.asarray(A)
    n = A.shape[-1]
    dtype = np.result_type(A.dtype, np.float64)
    L = np.zeros(A.shape, dtype=dtype)
    diag = np.real(np.diagonal(A, axis1=-2, axis2=-1))
    threshold = PIVOT_REL_TOL * diag.sum(axis=-1) / n
    bad = np.zeros(A.shape[:-2], dtype=bool)
    for j in range(n):
        row = L[..., j, :j]
        pivot = diag[..., j] - (np.abs(row) ** 2).sum(axis=-1)
        bad |= ~(pivot > threshold)
        ljj = np.sqrt(np.where(bad, 1.0, pivot))
        L[..., j, j] = ljj
        if j + 1 < n:
            below = A[..., j + 1:, j] - (L[..., j + 1:, :j] * np.conj(row)[..., None, :]).sum(axis=-1)
            L[..., j + 1:, j] = below / ljj[..., None]
    if bad.any():
        L[bad] = np.nan
    return L, bad


def cholesky(A):
    """Lower-triangular ``L`` with positive real diagonal and ``L L^H = A``.

    Raises :class:`NotPositiveDefinite` when any pivot falls at or below
    ``PIVOT_REL_TOL * trace(A) / n``.
    """
    L, bad = _cholesky(A)
    if np.any(bad):
        raise NotPositiveDefinite(
            f"{int(np.count_nonzero(bad))} matrix(es) not positive definite")
    return L


def _tril_inverse(L):
    """Inverse of a (stack of) lower-triangular matrix by forward substitution."""
    n = L.shape[-1]
    X = np.zeros_like(L)
    for i in range(n):
        # row i of L^{-1}: (e_i - sum_{k<i} L[i,k] X[k,:]) / L[i,i]
        acc = -(L[..., i, :i, None] * X[..., :i, :]).sum(axis=-2)
        acc[..., i] += 1.0
        X[..., i, :] = acc / L[..., i, i][..., None]
    return X


def inv_pd(A):
    """Inverse of a Hermitian positive-definite matrix via its Cholesky factor."""
    X = _tril_inverse(cholesky(A))
    Xh = np.conj(np.swapaxes(X, -1, -2))
    Ainv = (Xh[..., :, :, None] * X[..., None, :, :]).sum(axis=-2)
    return hermitian_part(Ainv)


def inv_diag_pd(A):
    """Diagonal of ``A^{-1}`` without forming the full inverse.

    ``[A^{-1}]_kk = sum_i |(L^{-1})_ik|^2``, which is real and positive by
    construction.
    """
    X = _tril_inverse(cholesky(A))
    return (np.abs(X) ** 2).sum(axis=-2)


def logdet_pd(A):
    L = cholesky(A)
    return 2.0 * np.log(np.real(np.diagonal(L, axis1=-2, axis2=-1))).sum(axis=-1)


def det_pd(A):
    """Determinant of a positive-definite matrix, accumulated in the log domain."""
    return np.exp(logdet_pd(A))


def diag_real(A, tol=IMAG_DIAG_TOL):
    d = np.diagonal(np.asarray(A), axis1=-2, axis2=-1)
    if np.iscomplexobj(d) and np.any(np.abs(d.imag) >= tol):
        raise NonRealDiagonal(f"diagonal imaginary residue {np.abs(d.imag).max():.3g}")
    return np.array(np.real(d), dtype=np.float64)
