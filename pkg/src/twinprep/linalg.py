"""Dense complex linear algebra for small Hermitian problems (dim <= 16).

Everything here is a thin, contract-checked layer over numpy's LAPACK
bindings. Matrix logarithms are NATURAL logs; conversion to bits happens
only in entropy-level code (see states.py / ree.py).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotPSD

# Fixed thresholds; dimensions <= 16 keep conditioning benign and fixed
# values make tests deterministic.
HERMITICITY_TOL = 1e-10
EIGENVALUE_CLAMP = 1e-10
SUPPORT_EPS = 1e-12


def as_complex_matrix(m) -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product, entry ((i*db+k),(j*db+l)) = a[i,j] * b[k,l]."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


@dataclass(frozen=True)
class EigenDecomposition:
    """Hermitian eigendecomposition with eigenvalues in ascending order.

    ``eigenvectors[:, k]`` is the unit eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def require_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    a = as_complex_matrix(m)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitian(f"max |H - H^dag| = {dev:.3e} exceeds {tol:.0e}")
    return a


def herm_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    a = require_hermitian(h)
    w, v = np.linalg.eigh(a)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def logm_on_support(h, eps: float = SUPPORT_EPS) -> np.ndarray:
    """Natural-log matrix function of a Hermitian PSD matrix on its support.

    Eigenvalues <= eps contribute 0 on their eigenspace; the caller is
    responsible for any support-inclusion checks the surrounding
    computation needs.
    """
    dec = herm_eig(h)
    w = dec.eigenvalues
    if np.min(w) < -EIGENVALUE_CLAMP:
        raise NotPSD(f"min eigenvalue {np.min(w):.3e} below -{EIGENVALUE_CLAMP:.0e}")
    w = np.clip(w, 0.0, None)
    logw = np.where(w > eps, np.log(np.where(w > eps, w, 1.0)), 0.0)
    v = dec.eigenvectors
    return (v * logw) @ v.conj().T
