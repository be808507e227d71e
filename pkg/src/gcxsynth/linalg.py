"""Dense complex linear algebra shared by the synthesis and analysis modules.

All routines are pure functions of numpy arrays. The matrices handled here
stay small (total dimension well below 100), so the code favours determinism
and clear contracts over scale.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

#: Frobenius tolerance for accepting a matrix as unitary.
UNITARITY_TOL = 1e-10
#: Frobenius tolerance for factorization round trips.
RECONSTRUCTION_TOL = 1e-9
#: Relative singular-value cutoff used for numeric rank decisions.
RANK_TOL = 1e-8


class NotUnitaryError(ValueError):
    """Raised when an operation that needs a unitary input gets something else."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex ndarray."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product, always in complex dtype."""
    return np.kron(as_matrix(a), as_matrix(b))


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def is_unitary(u, tol: float = UNITARITY_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return frobenius(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def require_unitary(u, tol: float = UNITARITY_TOL, what: str = "matrix") -> np.ndarray:
    u = as_matrix(u)
    if not is_unitary(u, tol):
        raise NotUnitaryError(f"{what} is not unitary within tolerance {tol}")
    return u


def best_phase(a, b) -> float:
    """Phase ``phi`` minimizing ``||a - exp(i phi) b||_F``.

    The minimizer is the argument of the trace overlap ``tr(b^dag a)``; when
    the overlap vanishes every phase is optimal and 0.0 is returned.
    """
    overlap = complex(np.trace(as_matrix(b).conj().T @ as_matrix(a)))
    if overlap == 0:
        return 0.0
    return float(np.angle(overlap))


def dist_up_to_global_phase(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` minimized over a global phase.

    Zero exactly when the two matrices agree up to ``exp(i phi)``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return frobenius(a - np.exp(1j * best_phase(a, b)) * b)


def principal_phases(values) -> np.ndarray:
    """Phases in [-pi, pi): the phase of -1 counts as -pi, so it sorts first."""
    ph = np.angle(np.asarray(values))
    return np.where(ph > np.pi - 1e-12, ph - 2.0 * np.pi, ph)


def eig_unitary(u, tol: float = UNITARITY_TOL):
    """Eigendecomposition ``u = V diag(lam) V^dag`` of a unitary matrix.

    Uses a complex Schur form so ``V`` is unitary even for degenerate spectra.
    Output is deterministic: eigenvalues sorted by phase ascending (with the
    phase of -1 counted as -pi), each eigenvector scaled so its largest entry
    is real positive, ties broken by lexicographic comparison of eigenvector
    columns.

    Returns:
        (eigenvalues, eigenvectors): 1-d array of unit-modulus values and the
        matrix whose columns are the matching eigenvectors.
    """
    u = require_unitary(u, tol)
    t, z = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t).copy()
    vecs = z.copy()
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        k = int(np.argmax(np.abs(col)))
        vecs[:, j] = col * np.exp(-1j * np.angle(col[k]))
    phases = principal_phases(lam)

    def sort_key(j):
        # ties broken by descending lexicographic column comparison, so the
        # eigenbasis of identity-like inputs comes out as the identity
        col = np.round(vecs[:, j], 12)
        return (round(phases[j], 12), tuple(zip(-col.real, -col.imag)))

    order = sorted(range(len(lam)), key=sort_key)
    return lam[order], vecs[:, order]


def svd(m):
    """Singular value decomposition ``m = U diag(s) Vh``.

    Singular values come back nonincreasing and nonnegative (numpy contract).
    """
    return np.linalg.svd(as_matrix(m))


def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar-random unitary of size ``dim`` (QR of a complex Ginibre matrix)."""
    rng = np.random.default_rng(rng)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
