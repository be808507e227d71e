"""Operator Schmidt analysis: realignment rank and product-operator expansions.

The operator Schmidt coefficients of a bipartite matrix are the singular
values of its realignment, the index reshuffle that turns product operators
into rank-one matrices. For the diagonal cores produced by the compilers the
module also builds explicit expansions over products of z-kind generators,
exhibiting the rank upper bounds term by term: 2 terms for a (2 x 2) core,
2N for (2 x N), 9 for (3 x 3) and M*N in general.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .diagonal import CanonicalCoreMN
from .generators import Generator, diagonal_product_basis, factor_matrix
from .linalg import RANK_TOL, as_matrix, kron, svd


@dataclass(frozen=True)
class SchmidtReport:
    """Realignment spectrum and the numeric rank it supports."""

    dims: tuple[int, int]
    singular_values: np.ndarray
    rank: int
    k_har: float
    tol: float


class ExpansionTerm(NamedTuple):
    coefficient: complex
    a_factor: Generator | None
    b_factor: Generator | None


@dataclass(frozen=True)
class DiagonalExpansion:
    """Sum of product terms reconstructing a diagonal bipartite unitary.

    Each factor is the identity (``None``) or a z-kind generator, so every
    term is a product operator; the number of terms with nonzero coefficient
    certifies an upper bound on the operator Schmidt rank.
    """

    dims: tuple[int, int]
    terms: tuple[ExpansionTerm, ...]
    source: str

    def matrix(self) -> np.ndarray:
        m, n = self.dims
        total = np.zeros((m * n, m * n), dtype=complex)
        for coeff, fa, fb in self.terms:
            total += coeff * kron(factor_matrix(m, None if fa is None else fa.a),
                                  factor_matrix(n, None if fb is None else fb.a))
        return total

    def nonzero_terms(self, tol: float = 1e-12) -> tuple[ExpansionTerm, ...]:
        return tuple(t for t in self.terms if abs(t.coefficient) > tol)


def realignment(u, m: int, n: int) -> np.ndarray:
    """Reshuffle entries ((i,j),(i',j')) of ``u`` to ((i,i'),(j,j')).

    The result is m^2 x n^2; its singular values are the operator Schmidt
    coefficients of ``u`` across the (A, B) split.
    """
    u = as_matrix(u)
    if u.shape != (m * n, m * n):
        raise ValueError(f"matrix shape {u.shape} does not factor as ({m}*{n})^2")
    return u.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def schmidt_rank(u, m: int, n: int, tol: float = RANK_TOL) -> SchmidtReport:
    """Numeric operator Schmidt rank via the realignment SVD.

    The rank counts singular values above ``tol * max(1, s_max)``; the full
    spectrum is reported so callers can re-threshold.
    """
    s = svd(realignment(u, m, n))[1]
    cutoff = tol * max(1.0, float(s[0]) if len(s) else 0.0)
    rank = int(np.sum(s > cutoff))
    k_har = float(np.log2(rank)) if rank > 0 else float("nan")
    return SchmidtReport((m, n), s, rank, k_har, tol)


def _zgen(dim: int, a: int) -> Generator:
    return Generator(dim, "z", a)


def expand_core_2x2(theta: float) -> DiagonalExpansion:
    """Two-term expansion of ``exp(i theta sigma_z (x) sigma_z)``.

    The coefficients are cos(theta) on the identity and i sin(theta) on the
    z (x) z product, so the gate has Schmidt rank two whenever both survive.
    """
    terms = (
        ExpansionTerm(complex(np.cos(theta)), None, None),
        ExpansionTerm(1j * np.sin(theta), _zgen(2, 2), _zgen(2, 2)),
    )
    return DiagonalExpansion((2, 2), terms, "closed-form-2x2")


def expand_core_2n(theta) -> DiagonalExpansion:
    """2N-term expansion of the controlled (2 x N) core.

    With ``c = (exp(i sum theta) + sum_a exp(-i theta_a)) / N`` the identity
    pair carries (Re c, i Im c) and each target z generator at level ``a``
    carries the pair split of ``c - exp(-i theta_{a-1})``.
    """
    theta = np.asarray(theta, dtype=float)
    n = len(theta) + 1
    c = (np.exp(1j * theta.sum()) + np.exp(-1j * theta).sum()) / n
    terms = [
        ExpansionTerm(complex(c.real), None, None),
        ExpansionTerm(1j * c.imag, _zgen(2, 2), None),
    ]
    for a in range(2, n + 1):
        x = c - np.exp(-1j * theta[a - 2])
        terms.append(ExpansionTerm(complex(x.real), None, _zgen(n, a)))
        terms.append(ExpansionTerm(1j * x.imag, _zgen(2, 2), _zgen(n, a)))
    return DiagonalExpansion((2, n), tuple(terms), "closed-form-2xN")


def expand_core_3x3(theta) -> DiagonalExpansion:
    """Nine-term closed-form expansion of the diagonal (3 x 3) core.

    ``theta`` holds the four product-generator angles in the order
    (2,2), (3,2), (2,3), (3,3) of (A level, B level). Every coefficient is an
    explicit trigonometric polynomial; the identity coefficient is shared by
    all terms as an additive base.
    """
    t1, t2, t3, t4 = (float(x) for x in np.asarray(theta, dtype=float))

    def cs(x):
        return np.cos(x), np.sin(x)

    c1, s1 = cs(t1)
    c2, s2 = cs(t2)
    c3, s3 = cs(t3)
    c4, s4 = cs(t4)
    c12, s12 = cs(t1 + t2)
    c13, s13 = cs(t1 + t3)
    c24, s24 = cs(t2 + t4)
    c34, s34 = cs(t3 + t4)
    call, sall = cs(t1 + t2 + t3 + t4)

    base = (call + c1 + c2 + c3 + c4 + c12 + c13 + c24 + c34
            + 1j * (sall + s1 + s2 + s3 + s4 - s12 - s13 - s24 - s34)) / 9.0

    def coeff(cos_part, sin_part):
        return base - cos_part / 3.0 + 1j * sin_part / 3.0

    za2, za3 = _zgen(3, 2), _zgen(3, 3)
    terms = (
        ExpansionTerm(base, None, None),
        ExpansionTerm(coeff(c12 + c1 + c2, s12 - s1 - s2), None, za2),
        ExpansionTerm(coeff(c34 + c3 + c4, s34 - s3 - s4), None, za3),
        ExpansionTerm(coeff(c13 + c1 + c3, s13 - s1 - s3), za2, None),
        ExpansionTerm(coeff(c24 + c2 + c4, s24 - s2 - s4), za3, None),
        ExpansionTerm(coeff(c12 + c13 - c1 + c2 + c3, s12 + s13 + s1 - s2 - s3), za2, za2),
        ExpansionTerm(coeff(c13 + c34 + c1 - c3 + c4, s13 + s34 - s1 + s3 - s4), za2, za3),
        ExpansionTerm(coeff(c12 + c24 + c1 - c2 + c4, s12 + s24 - s1 + s2 - s4), za3, za2),
        ExpansionTerm(coeff(c24 + c34 + c2 + c3 - c4, s24 + s34 - s2 - s3 + s4), za3, za3),
    )
    return DiagonalExpansion((3, 3), terms, "closed-form-3x3")


def expansion_from_diagonal(diag, m: int, n: int, source: str = "numeric-projection") -> DiagonalExpansion:
    """Expand a diagonal (given by its entries) over the z-generator products.

    The basis is not orthogonal, so the coefficients come from solving the
    square linear system on the diagonal vectors rather than from naive
    inner-product projection.
    """
    diag = np.asarray(diag, dtype=complex)
    if diag.shape != (m * n,):
        raise ValueError(f"expected {m * n} diagonal entries, got shape {diag.shape}")
    basis = diagonal_product_basis(m, n)
    a_mat = np.stack([vec for _, _, vec in basis], axis=1).astype(complex)
    coef = np.linalg.solve(a_mat, diag)
    terms = tuple(
        ExpansionTerm(complex(c),
                      None if at is None else _zgen(m, at),
                      None if a is None else _zgen(n, a))
        for c, (at, a, _) in zip(coef, basis)
    )
    return DiagonalExpansion((m, n), terms, source)


def expand_core_mn_numeric(core: CanonicalCoreMN) -> DiagonalExpansion:
    """M*N-term expansion of a general diagonal core, fit numerically."""
    m, n = core.dims
    return expansion_from_diagonal(np.diag(core.canonical_matrix()), m, n)
