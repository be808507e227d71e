import numpy as np
import pytest
import scipy.linalg

from gcxsynth import circuit as cir
from gcxsynth.controlled import (
    CanonicalCore2N,
    ControlledGateSpec,
    compile_core_2n,
    decompose_controlled_2n,
    synthesize_controlled_2n,
)
from gcxsynth.generators import PAULI_Z, cnot, z_generator
from gcxsynth.linalg import NotUnitaryError, dist_up_to_global_phase, kron, random_unitary
from gcxsynth.schmidt import schmidt_rank


def reconstruct(u_a, u_b, core, v_a, v_b):
    return kron(u_a, u_b) @ core.canonical_matrix() @ kron(v_a, v_b)


class TestSpec:
    def test_two_unitary_blocks_accepted(self):
        spec = ControlledGateSpec((np.eye(2), PAULI_Z))
        assert spec.target_dim == 2
        assert np.array_equal(spec.matrix(), np.diag([1, 1, 1, -1]).astype(complex))

    def test_non_unitary_block_rejected(self):
        with pytest.raises(NotUnitaryError):
            ControlledGateSpec((np.eye(2), np.ones((2, 2))))

    def test_wrong_block_count_rejected(self):
        with pytest.raises(ValueError, match="2 blocks"):
            ControlledGateSpec((np.eye(2), np.eye(2), np.eye(2)))


class TestDecompose:
    def test_equal_blocks_give_trivial_core(self):
        u = random_unitary(4, 19)
        spec = ControlledGateSpec((u, u))
        u_a, u_b, core, v_a, v_b = decompose_controlled_2n(spec)
        assert np.allclose(core.theta, 0.0, atol=1e-12)
        assert np.allclose(core.canonical_matrix(), np.eye(8), atol=1e-12)
        assert dist_up_to_global_phase(u_b @ v_b, u) <= 1e-10
        assert np.linalg.norm(reconstruct(u_a, u_b, core, v_a, v_b) - spec.matrix()) <= 1e-9

    def test_controlled_z(self):
        spec = ControlledGateSpec((np.eye(2), PAULI_Z))
        u_a, u_b, core, v_a, v_b = decompose_controlled_2n(spec)
        assert np.linalg.norm(reconstruct(u_a, u_b, core, v_a, v_b) - spec.matrix()) <= 1e-12
        # the nonlocal content survives in the core: realignment rank two
        assert schmidt_rank(core.canonical_matrix(), 2, 2).rank == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_random_round_trip(self, n):
        rng = np.random.default_rng(300 + n)
        for _ in range(10):
            spec = ControlledGateSpec((random_unitary(n, rng), random_unitary(n, rng)))
            u_a, u_b, core, v_a, v_b = decompose_controlled_2n(spec)
            assert np.linalg.norm(reconstruct(u_a, u_b, core, v_a, v_b) - spec.matrix()) <= 1e-9

    def test_core_blocks_are_conjugate(self):
        rng = np.random.default_rng(9)
        spec = ControlledGateSpec((random_unitary(5, rng), random_unitary(5, rng)))
        core = decompose_controlled_2n(spec)[2]
        mat = core.canonical_matrix()
        assert np.allclose(mat[:5, :5], mat[5:, 5:].conj(), atol=1e-14)


class TestCompileCore:
    def test_two_level_core_is_cnot_sandwich(self):
        core = CanonicalCore2N(np.array([np.pi / 4]), 0.0, 0.0)
        circ = compile_core_2n(core)
        counts = cir.count_gates(circ)
        assert counts.gcx == 2
        assert counts.rotation_gates_b == 1
        gcx_mats = [cir.gate_matrix(g, (2, 2)) for g in circ.gates if g.kind == cir.GATE_GCX]
        assert all(np.array_equal(g, cnot()) for g in gcx_mats)
        target = scipy.linalg.expm(1j * np.pi / 4 * kron(PAULI_Z, PAULI_Z))
        assert np.linalg.norm(cir.evaluate(circ) - target) <= 1e-12

    @pytest.mark.parametrize("n,gcx", [(2, 2), (3, 4), (4, 6), (6, 10)])
    def test_gcx_budget(self, n, gcx):
        rng = np.random.default_rng(n)
        core = CanonicalCore2N(rng.uniform(-1, 1, n - 1), 0.3, -0.1, 0.05)
        circ = compile_core_2n(core)
        counts = cir.count_gates(circ)
        assert counts.gcx == gcx
        assert counts.rotation_gates_b == n - 1
        assert counts.control_phases == 1
        assert np.linalg.norm(cir.evaluate(circ) - core.matrix()) <= 1e-10

    def test_matches_exponential_oracle(self):
        rng = np.random.default_rng(15)
        n = 4
        theta = rng.uniform(-np.pi, np.pi, n - 1)
        core = CanonicalCore2N(theta, 0.0, 0.0)
        h = sum(t * kron(PAULI_Z, z_generator(n, k + 2)) for k, t in enumerate(theta))
        assert np.linalg.norm(cir.evaluate(compile_core_2n(core))
                              - scipy.linalg.expm(1j * h)) <= 1e-10


class TestSynthesize:
    def test_two_level_counts(self):
        rng = np.random.default_rng(5)
        spec = ControlledGateSpec((random_unitary(2, rng), random_unitary(2, rng)))
        circ = synthesize_controlled_2n(spec)
        counts = cir.count_gates(circ)
        assert counts.gcx == 2
        assert counts.rotations_a == 6
        assert counts.rotations_b == 7
        assert counts.rotation_types_total == 13

    def test_three_level_counts(self):
        rng = np.random.default_rng(6)
        spec = ControlledGateSpec((random_unitary(3, rng), random_unitary(3, rng)))
        counts = cir.count_gates(synthesize_controlled_2n(spec))
        assert counts.gcx == 4
        assert counts.rotations_a == 6
        assert counts.rotations_b == 8

    def test_five_level_counts_and_reconstruction(self):
        rng = np.random.default_rng(7)
        spec = ControlledGateSpec((random_unitary(5, rng), random_unitary(5, rng)))
        circ = synthesize_controlled_2n(spec)
        counts = cir.count_gates(circ)
        assert counts.gcx == 8
        assert counts.rotations_b == 10
        assert dist_up_to_global_phase(cir.evaluate(circ), spec.matrix()) <= 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_reconstruction(self, n):
        rng = np.random.default_rng(400 + n)
        for _ in range(5):
            spec = ControlledGateSpec((random_unitary(n, rng), random_unitary(n, rng)))
            circ = synthesize_controlled_2n(spec)
            assert dist_up_to_global_phase(cir.evaluate(circ), spec.matrix()) <= 1e-9

    def test_identity_blocks_give_zero_angle_circuit(self):
        spec = ControlledGateSpec((np.eye(3), np.eye(3)))
        circ = synthesize_controlled_2n(spec)
        assert np.allclose(cir.evaluate(circ), np.eye(6), atol=1e-12)
        assert len(cir.optimize(circ).gates) == 0

    def test_block_gates_have_rank_at_most_two(self):
        rng = np.random.default_rng(8)
        for n in (2, 3, 5):
            spec = ControlledGateSpec((random_unitary(n, rng), random_unitary(n, rng)))
            assert schmidt_rank(spec.matrix(), 2, n).rank <= 2
