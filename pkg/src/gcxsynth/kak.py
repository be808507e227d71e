"""Factor one unitary into phase * orthogonal * diagonal * orthogonal.

Any U in U(N) splits as ``exp(i phase) * O1 * D * O2`` with O1, O2 real
special-orthogonal (realizable as y-rotation gates) and D a unit-determinant
diagonal unitary (a z-rotation gate). The construction goes through the
complex symmetric unitary ``S = V V^T`` of the phase-stripped input V: a
Takagi-style factorization ``S = O1 D^2 O1^T`` with a real orthogonal O1 is
built from the eigenspaces of S, which are closed under complex conjugation
and therefore admit real orthonormal bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .generators import y_pair_indices, y_rotation_matrix, z_rotation_matrix
from .linalg import (
    RECONSTRUCTION_TOL,
    UNITARITY_TOL,
    as_matrix,
    dist_up_to_global_phase,
    frobenius,
    require_unitary,
)

#: Eigenvalues of S closer than this (in modulus) are treated as one eigenspace.
EIGENVALUE_GROUP_TOL = 1e-8


@dataclass(frozen=True)
class KakFactorization:
    """Result of :func:`kak_decompose`.

    ``phase`` is the stripped global phase, ``o1`` / ``o2`` the real
    special-orthogonal factors and ``z_angles`` the length N-1 angle vector of
    the diagonal factor. ``y_angles1`` / ``y_angles2`` hold the y-rotation
    angles of ``o1`` / ``o2`` when extraction succeeded, else ``None``.
    """

    phase: float
    o1: np.ndarray
    z_angles: np.ndarray
    o2: np.ndarray
    y_angles1: np.ndarray | None = None
    y_angles2: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.o1.shape[0]

    def diagonal_matrix(self) -> np.ndarray:
        return z_rotation_matrix(self.dim, self.z_angles)

    def matrix(self) -> np.ndarray:
        """Reconstruct ``exp(i phase) * o1 * D * o2``."""
        return np.exp(1j * self.phase) * self.o1 @ self.diagonal_matrix() @ self.o2


def _group_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Cluster unit-modulus values by modulus distance, phase descending.

    Clusters split at the branch cut are merged, so -1 never falls apart into
    a +pi and a -pi group.
    """
    order = sorted(range(len(values)), key=lambda j: -np.angle(values[j]))
    groups: list[list[int]] = []
    for j in order:
        if groups and abs(values[j] - values[groups[-1][0]]) <= tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    if len(groups) > 1 and abs(values[groups[0][0]] - values[groups[-1][0]]) <= tol:
        groups[0].extend(groups.pop())
    return groups


def _real_eigenbasis(s: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Real orthogonal O and group phases with ``S = O diag(exp(i phi)) O^T``.

    Eigen-decomposes the complex symmetric unitary ``s``, groups eigenvalues
    within ``tol`` and re-orthonormalizes each eigenspace to a real basis
    obtained by pivoted QR on the stacked real and imaginary parts of its
    eigenvectors.
    """
    t, z = scipy.linalg.schur(s, output="complex")
    lam = np.diag(t)
    n = s.shape[0]
    columns = []
    phis = []
    for idx in _group_indices(lam, tol):
        rep = np.mean(lam[idx])
        rep /= abs(rep)
        block = z[:, idx]
        stacked = np.hstack([block.real, block.imag])
        q, _, _ = scipy.linalg.qr(stacked, mode="economic", pivoting=True)
        basis = q[:, : len(idx)]
        resid = frobenius(s @ basis - rep * basis)
        if resid > 1e-6:
            raise ValueError(
                f"failed to build a real eigenbasis (residual {resid:.2e}); "
                "eigenvalue grouping tolerance breached"
            )
        for k in range(basis.shape[1]):
            col = basis[:, k]
            lead = int(np.argmax(np.abs(col)))
            if col[lead] < 0:
                basis[:, k] = -col
        columns.append(basis)
        phis.extend([np.angle(rep)] * len(idx))
    o = np.hstack(columns)
    # polish away the residual non-orthogonality so reconstruction is exact
    q, r = np.linalg.qr(o)
    o = q * np.sign(np.diag(r))
    assert o.shape == (n, n)
    return o, np.asarray(phis)


def kak_decompose(u, tol: float = UNITARITY_TOL, extract_angles: bool = True) -> KakFactorization:
    """Factor a unitary into ``exp(i phase) * O1 * D * O2``.

    Args:
        u: square unitary matrix.
        tol: unitarity tolerance for the input check.
        extract_angles: also recover the y-rotation angle vectors of O1, O2.

    Raises:
        NotUnitaryError: input fails the unitarity check.
        ValueError: the real eigenbasis construction breaks down (tolerance
            breach, not a valid outcome).
    """
    u = require_unitary(u, tol, "kak input")
    n = u.shape[0]
    phase = float(np.angle(np.linalg.det(u)) / n)
    v = u * np.exp(-1j * phase)
    s = v @ v.T

    o1, phis = _real_eigenbasis(s, EIGENVALUE_GROUP_TOL)
    d = np.exp(0.5j * phis)
    o2 = (d.conj()[:, None] * o1.T) @ v

    flip = np.ones(n)
    flip[0] = -1.0
    if np.linalg.det(o1) < 0:
        o1 = o1 * flip[None, :]
        o2 = o2 * flip[:, None]
    if np.prod(d).real < 0:
        d = d * flip
        o2 = o2 * flip[:, None]

    imag = float(np.max(np.abs(o2.imag)))
    if imag > 1e-8:
        raise ValueError(f"orthogonal factor came out non-real (max imag {imag:.2e})")
    o2 = o2.real.astype(float)
    o1 = o1.astype(float)

    z_angles = -np.angle(d[1:])
    y1 = y2 = None
    if extract_angles:
        try:
            y1 = extract_y_angles(o1)
            y2 = extract_y_angles(o2)
        except ValueError:
            y1 = y2 = None

    fact = KakFactorization(phase, o1, z_angles, o2, y1, y2)
    resid = dist_up_to_global_phase(fact.matrix(), u)
    if resid > RECONSTRUCTION_TOL:
        raise ValueError(f"factorization failed to reconstruct (residual {resid:.2e})")
    return fact


def decompose_u3_form(u) -> KakFactorization:
    """Three-level specialization of :func:`kak_decompose`."""
    u = as_matrix(u)
    if u.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {u.shape}")
    return kak_decompose(u)


def extract_y_angles(o, tol: float = 1e-9) -> np.ndarray:
    """Angles ``t`` with ``y_rotation_matrix(dim, t) == o``.

    Works through the real Schur form: rotation angles are read off the 2x2
    blocks, and -1 eigenvalues (rotation angle exactly pi) are paired into
    pi-rotation planes, which keeps the antisymmetric logarithm real.

    Raises:
        ValueError: input is not real special-orthogonal (determinant -1 is
            not in the exponential image).
    """
    o = as_matrix(o)
    if np.max(np.abs(o.imag)) > tol:
        raise ValueError("expected a real orthogonal matrix")
    o = o.real.astype(float)
    n = o.shape[0]
    if frobenius(o.T @ o - np.eye(n)) > 1e-8:
        raise ValueError("matrix is not orthogonal")
    if np.linalg.det(o) < 0:
        raise ValueError("determinant -1 matrices have no y-rotation realization")

    t, q = scipy.linalg.schur(o, output="real")
    k = np.zeros((n, n))
    minus_ones = []
    j = 0
    while j < n:
        if j + 1 < n and abs(t[j + 1, j]) > 1e-10:
            c = 0.5 * (t[j, j] + t[j + 1, j + 1])
            sn = 0.5 * (t[j, j + 1] - t[j + 1, j])
            ang = float(np.arctan2(sn, c))
            k[j, j + 1] = ang
            k[j + 1, j] = -ang
            j += 2
        else:
            if t[j, j] < 0:
                minus_ones.append(j)
            j += 1
    if len(minus_ones) % 2:
        raise ValueError("odd count of -1 eigenvalues; matrix is not special orthogonal")
    for p, r in zip(minus_ones[0::2], minus_ones[1::2]):
        k[p, r] = np.pi
        k[r, p] = -np.pi
    a = q @ k @ q.T

    pairs = y_pair_indices(n)
    angles = np.array([a[pa - 1, pb - 1] for pa, pb in pairs])
    if frobenius(y_rotation_matrix(n, angles) - o) > RECONSTRUCTION_TOL:
        raise ValueError("angle extraction failed to round-trip")
    return angles
