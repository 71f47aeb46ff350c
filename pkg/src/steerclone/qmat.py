"""Dense complex-matrix kernel: tensor products, partial traces, Hermitian
spectral tools.

Everything here operates on plain ``numpy`` arrays of ``complex128``.  All
matrices in this project are small (dimension 32 or less), so the routines
favour clarity and strict validation over speed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Absolute entry-wise tolerance for calling a matrix Hermitian.
HERMITIAN_ATOL = 1e-12
# Eigenvalues above this (tiny negative) threshold are treated as roundoff
# and clamped to zero; anything below -PSD_ATOL is a genuine negative.
EIG_CLAMP = -1e-12
PSD_ATOL = 1e-9


def as_cmatrix(m: np.ndarray | Sequence) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    a = as_cmatrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product with the row-major index convention
    (i*db + k, j*db + l) -> a[i, j] * b[k, l]."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def kron_all(*ms: np.ndarray) -> np.ndarray:
    """Left-to-right tensor product of any number of factors."""
    out = as_cmatrix(ms[0])
    for m in ms[1:]:
        out = np.kron(out, as_cmatrix(m))
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; ``keep`` is a
    subsystem index or set of indices.  Kept subsystems retain their
    original relative order.  The total trace is preserved.
    """
    a = as_cmatrix(m)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if total != a.shape[0]:
        raise ValueError(
            f"dimension mismatch: prod({dims}) = {total} but matrix is {a.shape[0]}x{a.shape[0]}"
        )
    keep_set = {int(keep)} if isinstance(keep, (int, np.integer)) else {int(k) for k in keep}
    n = len(dims)
    if not keep_set:
        raise ValueError("keep must name at least one subsystem")
    if not keep_set <= set(range(n)):
        raise ValueError(f"keep indices {sorted(keep_set)} out of range for {n} subsystems")

    keep_order = sorted(keep_set)
    tensor = a.reshape(dims + dims)
    # Row index i and column index n+i of subsystem i; contract the traced pairs.
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in range(n):
        if i not in keep_set:
            col[i] = row[i]
    out_axes = [row[i] for i in keep_order] + [col[i] for i in keep_order]
    reduced = np.einsum(tensor, row + col, out_axes)
    dkeep = int(np.prod([dims[i] for i in keep_order]))
    return reduced.reshape(dkeep, dkeep)


def herm_eig(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` real and sorted descending and
    orthonormal eigenvectors in the columns of ``v``.  Rejects non-Hermitian
    input.  For degenerate spectra the basis within an eigenspace is
    arbitrary; callers must not rely on it.
    """
    a = as_cmatrix(m)
    if not is_hermitian(a, atol):
        dev = float(np.max(np.abs(a - a.conj().T)))
        raise ValueError(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3e})")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian positive-semidefinite matrix.

    Eigenvalues in [-PSD_ATOL, 0) are clamped to zero; anything more
    negative is rejected as non-PSD.
    """
    w, v = herm_eig(m)
    if w[-1] < -PSD_ATOL:
        raise ValueError(f"matrix is not PSD (smallest eigenvalue {w[-1]:.3e})")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def comm_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of the commutator [a, b] = ab - ba."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a @ b - b @ a))


def frob_dist(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance ||a - b||_F."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
