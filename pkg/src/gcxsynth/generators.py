"""Hermitian generator basis of u(N) and the elementary gate matrices.

The basis comes in three kinds, indexed by 1-based level indices:

* ``x``: symmetric coupling of levels ``a < b`` (real off-diagonal pair),
* ``y``: antisymmetric coupling of levels ``a < b`` (imaginary pair),
* ``z``: diagonal difference between level 1 and level ``a >= 2``.

Real combinations of the ``y`` kind exponentiate to real special-orthogonal
matrices; real combinations of the ``z`` kind exponentiate to unit-determinant
diagonal unitaries. Together with the identity the three kinds span all
Hermitian N x N matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, kron

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


@dataclass(frozen=True)
class Generator:
    """One tagged basis element of u(dim).

    ``kind`` is ``"x"``, ``"y"`` or ``"z"``. For pair kinds the indices must
    satisfy ``1 <= a < b <= dim``; the ``z`` kind uses ``2 <= a <= dim`` and
    ignores ``b``.
    """

    dim: int
    kind: str
    a: int
    b: int | None = None

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"generator dimension must be >= 2, got {self.dim}")
        if self.kind in ("x", "y"):
            if self.b is None or not (1 <= self.a < self.b <= self.dim):
                raise ValueError(
                    f"pair generator needs 1 <= a < b <= {self.dim}, got ({self.a}, {self.b})"
                )
        elif self.kind == "z":
            if not (2 <= self.a <= self.dim):
                raise ValueError(f"diagonal generator needs 2 <= a <= {self.dim}, got {self.a}")
            if self.b is not None:
                raise ValueError("diagonal generator takes no second index")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def matrix(self) -> np.ndarray:
        return generator_matrix(self)


def generator_matrix(g: Generator) -> np.ndarray:
    """Realize a tagged generator as its Hermitian matrix."""
    m = np.zeros((g.dim, g.dim), dtype=complex)
    if g.kind == "x":
        m[g.a - 1, g.b - 1] = 1.0
        m[g.b - 1, g.a - 1] = 1.0
    elif g.kind == "y":
        m[g.a - 1, g.b - 1] = -1j
        m[g.b - 1, g.a - 1] = 1j
    else:
        m[0, 0] = 1.0
        m[g.a - 1, g.a - 1] = -1.0
    return m


def x_generator(dim: int, a: int, b: int) -> np.ndarray:
    return generator_matrix(Generator(dim, "x", a, b))


def y_generator(dim: int, a: int, b: int) -> np.ndarray:
    return generator_matrix(Generator(dim, "y", a, b))


def z_generator(dim: int, a: int) -> np.ndarray:
    return generator_matrix(Generator(dim, "z", a))


def traceless_basis(dim: int) -> list[Generator]:
    """The dim^2 - 1 traceless generators: x pairs, y pairs, then z diagonals."""
    gens = [Generator(dim, "x", a, b) for a, b in y_pair_indices(dim)]
    gens += [Generator(dim, "y", a, b) for a, b in y_pair_indices(dim)]
    gens += [Generator(dim, "z", a) for a in range(2, dim + 1)]
    return gens


def y_pair_indices(dim: int) -> list[tuple[int, int]]:
    """Pair ordering used for y-rotation angle vectors: (1,2), (1,3), ..., (dim-1,dim)."""
    return [(a, b) for a in range(1, dim + 1) for b in range(a + 1, dim + 1)]


def y_angle_count(dim: int) -> int:
    return dim * (dim - 1) // 2


def z_angle_count(dim: int) -> int:
    return dim - 1


def y_rotation_matrix(dim: int, angles) -> np.ndarray:
    """Exponential of i times the angle-weighted sum of y-kind generators.

    The result is a real special-orthogonal matrix (returned with complex
    dtype). The exponential is computed by eigendecomposition of the Hermitian
    generator sum, which is exact for these normal matrices.
    """
    angles = np.asarray(angles, dtype=float)
    pairs = y_pair_indices(dim)
    if angles.shape != (len(pairs),):
        raise ValueError(f"expected {len(pairs)} y angles for dim {dim}, got {angles.shape}")
    h = np.zeros((dim, dim), dtype=complex)
    for t, (a, b) in zip(angles, pairs):
        h[a - 1, b - 1] += -1j * t
        h[b - 1, a - 1] += 1j * t
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def z_rotation_matrix(dim: int, angles) -> np.ndarray:
    """Exponential of i times the angle-weighted sum of z-kind generators.

    Closed form: a diagonal unitary with entry ``exp(i sum(angles))`` on the
    first level and ``exp(-i angles[a-2])`` on level ``a``; determinant 1.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (dim - 1,):
        raise ValueError(f"expected {dim - 1} z angles for dim {dim}, got {angles.shape}")
    diag = np.concatenate(([np.exp(1j * angles.sum())], np.exp(-1j * angles)))
    return np.diag(diag)


def rotation_matrix(axis: str, dim: int, angles) -> np.ndarray:
    if axis == "y":
        return y_rotation_matrix(dim, angles)
    if axis == "z":
        return z_rotation_matrix(dim, angles)
    raise ValueError(f"unknown rotation axis {axis!r}")


def x_swap(dim: int, i: int, j: int) -> np.ndarray:
    """Permutation unitary exchanging levels ``i`` and ``j`` (0-based)."""
    if not (0 <= i < j <= dim - 1):
        raise ValueError(f"need 0 <= i < j <= {dim - 1}, got ({i}, {j})")
    m = identity(dim)
    m[[i, j]] = m[[j, i]]
    return m


def gcx_matrix(
    control_dim: int,
    target_dim: int,
    control_value: int,
    swap: tuple[int, int],
    control_side: str = "A",
) -> np.ndarray:
    """Generalized controlled-X: swap two target levels iff the control is |m>.

    ``control_side`` selects which tensor factor carries the control. For side
    ``"A"`` the first factor has dimension ``control_dim`` and the swap acts on
    the second; side ``"B"`` is the mirrored embedding (the swap acts on the
    first factor, selected by the state of the second). The realized matrix is
    a self-inverse permutation.
    """
    if not (0 <= control_value < control_dim):
        raise ValueError(f"control value {control_value} out of range for dim {control_dim}")
    x = x_swap(target_dim, *swap)
    blocks = []
    for v in range(control_dim):
        sel = np.zeros((control_dim, control_dim), dtype=complex)
        sel[v, v] = 1.0
        op = x if v == control_value else identity(target_dim)
        if control_side == "A":
            blocks.append(kron(sel, op))
        elif control_side == "B":
            blocks.append(kron(op, sel))
        else:
            raise ValueError(f"control side must be 'A' or 'B', got {control_side!r}")
    return sum(blocks)


def cnot() -> np.ndarray:
    """The qubit controlled-NOT: flip the target iff the control is |1>."""
    return gcx_matrix(2, 2, 1, (0, 1), "A")


def controlled_z_rotation_matrix(
    control_dim: int,
    control_value: int,
    target_dim: int,
    angles,
) -> np.ndarray:
    """Apply a z-rotation on the target iff the control is |m>, else identity."""
    if not (0 <= control_value < control_dim):
        raise ValueError(f"control value {control_value} out of range for dim {control_dim}")
    rot = z_rotation_matrix(target_dim, angles)
    out = np.zeros((control_dim * target_dim,) * 2, dtype=complex)
    for v in range(control_dim):
        blk = rot if v == control_value else identity(target_dim)
        out[v * target_dim : (v + 1) * target_dim, v * target_dim : (v + 1) * target_dim] = blk
    return out


def diagonal_product_basis(m: int, n: int) -> list[tuple[int | None, int | None, np.ndarray]]:
    """Basis of the diagonal matrices on an (m x n)-partite space.

    Each element is ``(a_index, b_index, diag_vector)`` where an index is the
    1-based z-generator level on that side or ``None`` for the identity. Order:
    identity, identity (x) z_a for a = 2..n, z_atilde (x) identity for
    atilde = 2..m, then the products row-major in (atilde, a). The m*n vectors
    are linearly independent, so phase fits over this basis are unique.
    """
    ones_a = np.ones(m)
    ones_b = np.ones(n)

    def zdiag(dim, a):
        d = np.zeros(dim)
        d[0] = 1.0
        d[a - 1] = -1.0
        return d

    basis: list[tuple[int | None, int | None, np.ndarray]] = [(None, None, np.kron(ones_a, ones_b))]
    basis += [(None, a, np.kron(ones_a, zdiag(n, a))) for a in range(2, n + 1)]
    basis += [(at, None, np.kron(zdiag(m, at), ones_b)) for at in range(2, m + 1)]
    basis += [
        (at, a, np.kron(zdiag(m, at), zdiag(n, a)))
        for at in range(2, m + 1)
        for a in range(2, n + 1)
    ]
    return basis


def factor_matrix(dim: int, index: int | None) -> np.ndarray:
    """Identity for ``None`` else the z-kind generator at the given level."""
    if index is None:
        return identity(dim)
    return z_generator(dim, index)


def embed(side: str, op, dim_a: int, dim_b: int) -> np.ndarray:
    """Kronecker-embed a one-sided operator into the full bipartite space."""
    op = as_matrix(op)
    if side == "A":
        return kron(op, identity(dim_b))
    if side == "B":
        return kron(identity(dim_a), op)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")
