import numpy as np
import pytest
import scipy.linalg

from gcxsynth.controlled import ControlledGateSpec
from gcxsynth.diagonal import CanonicalCoreMN
from gcxsynth.generators import PAULI_Z, cnot, diagonal_product_basis, factor_matrix, z_generator
from gcxsynth.linalg import kron, random_unitary
from gcxsynth.schmidt import (
    expand_core_2n,
    expand_core_2x2,
    expand_core_3x3,
    expand_core_mn_numeric,
    expansion_from_diagonal,
    realignment,
    schmidt_rank,
)

SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)


def realignment_by_loops(u, m, n):
    """Element-by-element oracle for the index reshuffle."""
    out = np.zeros((m * m, n * n), dtype=complex)
    for i in range(m):
        for ip in range(m):
            for j in range(n):
                for jp in range(n):
                    out[i * m + ip, j * n + jp] = u[i * n + j, ip * n + jp]
    return out


def gram_projection_oracle(target, m, n):
    """Coefficients over the z-generator product basis via trace inner products.

    The basis is not orthogonal, so this solves the Gram system; it is
    independent of the library's diagonal-vector solve.
    """
    mats = [kron(factor_matrix(m, at), factor_matrix(n, a))
            for at, a, _ in diagonal_product_basis(m, n)]
    gram = np.array([[np.trace(x.conj().T @ y) for y in mats] for x in mats])
    rhs = np.array([np.trace(x.conj().T @ target) for x in mats])
    return np.linalg.solve(gram, rhs)


def keyed_coeffs(expansion):
    return {
        (None if a is None else a.a, None if b is None else b.a): c
        for c, a, b in expansion.terms
    }


def core_matrix_2n(theta):
    n = len(theta) + 1
    h = sum(t * kron(PAULI_Z, z_generator(n, k + 2)) for k, t in enumerate(theta))
    return scipy.linalg.expm(1j * h)


def core_matrix_33(theta4):
    t1, t2, t3, t4 = theta4
    mat = np.array([[t1, t3], [t2, t4]])
    h = sum(mat[i, j] * kron(z_generator(3, i + 2), z_generator(3, j + 2))
            for i in range(2) for j in range(2))
    return scipy.linalg.expm(1j * h)


class TestRealignment:
    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(1)
        u = random_unitary(6, rng)
        assert np.array_equal(realignment(u, 2, 3), realignment_by_loops(u, 2, 3))
        assert np.array_equal(realignment(u, 3, 2), realignment_by_loops(u, 3, 2))

    def test_product_operator_is_rank_one(self):
        rng = np.random.default_rng(2)
        a, b = random_unitary(3, rng), random_unitary(4, rng)
        s = np.linalg.svd(realignment(kron(a, b), 3, 4), compute_uv=False)
        assert s[0] == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b), abs=1e-12)
        assert np.all(s[1:] <= 1e-12)

    def test_identity_four(self):
        report = schmidt_rank(np.eye(4), 2, 2)
        assert report.rank == 1
        assert report.singular_values[0] == pytest.approx(2.0, abs=1e-12)

    def test_swap_rank_four(self):
        assert np.array_equal(realignment(SWAP, 2, 2), realignment_by_loops(SWAP, 2, 2))
        report = schmidt_rank(SWAP, 2, 2)
        assert report.rank == 4
        assert np.allclose(report.singular_values, 1.0, atol=1e-12)

    def test_bad_dims_raise(self):
        with pytest.raises(ValueError, match="factor"):
            realignment(np.eye(6), 2, 2)

    def test_transposed_convention_same_spectrum(self):
        rng = np.random.default_rng(3)
        u = random_unitary(6, rng)
        s1 = np.linalg.svd(realignment(u, 2, 3), compute_uv=False)
        s2 = np.linalg.svd(realignment(u, 2, 3).T, compute_uv=False)
        assert np.allclose(s1, s2, atol=1e-12)


class TestSchmidtRank:
    def test_cnot(self):
        report = schmidt_rank(cnot(), 2, 2)
        assert report.rank == 2
        assert report.k_har == pytest.approx(1.0)

    def test_identity(self):
        report = schmidt_rank(np.eye(12), 3, 4)
        assert report.rank == 1
        assert report.k_har == 0.0

    def test_block_controlled_gates_rank_at_most_two(self):
        rng = np.random.default_rng(4)
        for n in (2, 3, 4, 6):
            spec = ControlledGateSpec((random_unitary(n, rng), random_unitary(n, rng)))
            assert schmidt_rank(spec.matrix(), 2, n).rank <= 2

    def test_normalization_sum_of_squares(self):
        rng = np.random.default_rng(5)
        for m, n in ((2, 3), (3, 3), (3, 4)):
            u = random_unitary(m * n, rng)
            s = schmidt_rank(u, m, n).singular_values
            assert np.sum(s**2) == pytest.approx(m * n, abs=1e-9)

    def test_invariance_under_local_unitaries(self):
        rng = np.random.default_rng(6)
        u = random_unitary(6, rng)
        base = schmidt_rank(u, 2, 3).rank
        for _ in range(5):
            dressed = (kron(random_unitary(2, rng), random_unitary(3, rng)) @ u
                       @ kron(random_unitary(2, rng), random_unitary(3, rng)))
            assert schmidt_rank(dressed, 2, 3).rank == base

    def test_two_by_two_core_rank_exactly_two(self):
        for theta in np.linspace(-np.pi, np.pi, 41):
            core = scipy.linalg.expm(1j * theta * kron(PAULI_Z, PAULI_Z))
            rank = schmidt_rank(core, 2, 2).rank
            if abs(np.sin(2 * theta)) > 1e-6:
                assert rank == 2
            else:
                assert rank == 1


class TestExpandTwoByTwo:
    def test_zero_angle_single_effective_term(self):
        e = expand_core_2x2(0.0)
        assert len(e.nonzero_terms()) == 1
        assert e.terms[0].coefficient == 1.0

    def test_quarter_pi_coefficients(self):
        e = expand_core_2x2(np.pi / 4)
        assert e.terms[0].coefficient == pytest.approx(np.sqrt(2) / 2)
        assert e.terms[1].coefficient == pytest.approx(1j * np.sqrt(2) / 2)

    def test_reconstruction(self):
        for theta in (0.0, 0.3, np.pi / 4, -2.2):
            target = scipy.linalg.expm(1j * theta * kron(PAULI_Z, PAULI_Z))
            assert np.linalg.norm(expand_core_2x2(theta).matrix() - target) <= 1e-15


class TestExpandTwoByN:
    def test_zero_angles(self):
        e = expand_core_2n(np.zeros(3))
        nz = e.nonzero_terms()
        assert len(nz) == 1
        assert nz[0].coefficient == pytest.approx(1.0)

    def test_three_level_displayed_coefficients(self):
        # the six published coefficient formulas for the (2 x 3) core
        t1, t2 = 0.7, -0.4
        c1, s1, c2, s2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
        c12, s12 = np.cos(t1 + t2), np.sin(t1 + t2)
        expected = {
            (None, None): (c12 + c1 + c2) / 3,
            (None, 2): (c12 - 2 * c1 + c2) / 3,
            (None, 3): (c12 + c1 - 2 * c2) / 3,
            (2, None): 1j * (s12 - s1 - s2) / 3,
            (2, 2): 1j * (s12 + 2 * s1 - s2) / 3,
            (2, 3): 1j * (s12 - s1 + 2 * s2) / 3,
        }
        got = keyed_coeffs(expand_core_2n([t1, t2]))
        assert set(got) == set(expected)
        for key, val in expected.items():
            assert got[key] == pytest.approx(val, abs=1e-14), key

    def test_term_count_is_2n(self):
        rng = np.random.default_rng(7)
        for n in (2, 3, 5, 6):
            e = expand_core_2n(rng.uniform(-np.pi, np.pi, n - 1))
            assert len(e.terms) == 2 * n

    def test_reconstruction_and_gram_oracle(self):
        rng = np.random.default_rng(8)
        for n in (3, 4, 5):
            theta = rng.uniform(-np.pi, np.pi, n - 1)
            e = expand_core_2n(theta)
            target = core_matrix_2n(theta)
            assert np.linalg.norm(e.matrix() - target) <= 1e-12
            oracle = gram_projection_oracle(target, 2, n)
            got = keyed_coeffs(e)
            for coef, (at, a, _) in zip(oracle, diagonal_product_basis(2, n)):
                assert got[(at, a)] == pytest.approx(coef, abs=1e-12)

    def test_rank_bounded_by_term_count(self):
        rng = np.random.default_rng(9)
        for n in (3, 4, 6):
            theta = rng.uniform(-np.pi, np.pi, n - 1)
            rank = schmidt_rank(core_matrix_2n(theta), 2, n).rank
            assert rank <= len(expand_core_2n(theta).nonzero_terms())


class TestExpandThreeByThree:
    def test_zero_angles(self):
        e = expand_core_3x3(np.zeros(4))
        assert e.terms[0].coefficient == pytest.approx(1.0)
        assert len(e.nonzero_terms()) == 1

    def test_reconstruction_and_gram_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            theta = rng.uniform(-np.pi, np.pi, 4)
            e = expand_core_3x3(theta)
            target = core_matrix_33(theta)
            assert np.linalg.norm(e.matrix() - target) <= 1e-12
            oracle = gram_projection_oracle(target, 3, 3)
            got = keyed_coeffs(e)
            for coef, (at, a, _) in zip(oracle, diagonal_product_basis(3, 3)):
                assert got[(at, a)] == pytest.approx(coef, abs=1e-12)

    def test_single_angle_embeds_in_two_by_n_structure(self):
        # with only the first angle on, the top two A-levels behave like the
        # controlled core and the third A-level is inert
        t = 0.9
        full = expand_core_3x3([t, 0.0, 0.0, 0.0]).matrix()
        small = expand_core_2n([t, 0.0]).matrix()
        assert np.linalg.norm(full[:6, :6] - small) <= 1e-12
        assert np.linalg.norm(full[6:, 6:] - np.eye(3)) <= 1e-12

    def test_nine_terms(self):
        assert len(expand_core_3x3([0.1, 0.2, 0.3, 0.4]).terms) == 9


class TestExpandNumeric:
    def test_zero_core(self):
        core = CanonicalCoreMN((3, 4), np.zeros((2, 3)), np.zeros(2), np.zeros(3))
        e = expand_core_mn_numeric(core)
        nz = e.nonzero_terms()
        assert len(nz) == 1 and nz[0].coefficient == pytest.approx(1.0)

    def test_agrees_with_three_by_three_closed_form(self):
        rng = np.random.default_rng(11)
        theta = rng.uniform(-np.pi, np.pi, 4)
        t1, t2, t3, t4 = theta
        core = CanonicalCoreMN((3, 3), np.array([[t1, t3], [t2, t4]]), np.zeros(2), np.zeros(2))
        closed = keyed_coeffs(expand_core_3x3(theta))
        numeric = keyed_coeffs(expand_core_mn_numeric(core))
        assert set(closed) == set(numeric)
        for key in closed:
            assert closed[key] == pytest.approx(numeric[key], abs=1e-12), key

    def test_four_by_four_reconstruction_and_rank(self):
        rng = np.random.default_rng(12)
        core = CanonicalCoreMN((4, 4), rng.uniform(-np.pi, np.pi, (3, 3)),
                               np.zeros(3), np.zeros(3))
        e = expand_core_mn_numeric(core)
        target = core.canonical_matrix()
        assert len(e.terms) == 16
        assert np.linalg.norm(e.matrix() - target) <= 1e-12
        assert schmidt_rank(target, 4, 4).rank <= 16

    def test_expansion_from_diagonal_validates_length(self):
        with pytest.raises(ValueError, match="diagonal entries"):
            expansion_from_diagonal(np.ones(5), 2, 3)
