"""Synthesis of controlled gates on a (2 x N) register, control on side A.

Input is the block form ``|0><0| (x) U0 + |1><1| (x) U1``. The nonlocal part
reduces to a diagonal core ``exp(i sum_k theta_k sigma_z (x) Z_k)`` over the
commuting products of the qubit z generator with the target-side z kind; the
core compiles into 2(N-1) generalized controlled-X gates sandwiching
single-partite z rotations. The local factors compile through the
single-partite factorization into three rotations each.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import circuit as cir
from .kak import kak_decompose
from .linalg import (
    UNITARITY_TOL,
    eig_unitary,
    kron,
    principal_phases,
    require_unitary,
)
from .generators import z_rotation_matrix


@dataclass(frozen=True)
class ControlledGateSpec:
    """A controlled gate given by its two target-side blocks (U0, U1)."""

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != 2:
            raise ValueError(f"expected exactly 2 blocks, got {len(self.blocks)}")
        checked = []
        n = None
        for i, b in enumerate(self.blocks):
            b = require_unitary(b, UNITARITY_TOL, f"block {i}")
            if n is None:
                n = b.shape[0]
            elif b.shape[0] != n:
                raise ValueError("blocks must share one dimension")
            checked.append(b)
        object.__setattr__(self, "blocks", tuple(checked))

    @property
    def target_dim(self) -> int:
        return self.blocks[0].shape[0]

    def matrix(self) -> np.ndarray:
        """The full block-diagonal gate on the (2 x N) register."""
        return scipy.linalg.block_diag(*self.blocks).astype(complex)


@dataclass(frozen=True)
class CanonicalCore2N:
    """Diagonal core of a controlled (2 x N) gate plus its phase bookkeeping.

    ``theta`` (length N-1) parametrizes the canonical part, whose two diagonal
    blocks are elementwise complex conjugates. ``alpha0`` / ``alpha1`` are the
    control-side phases split off during decomposition and ``global_phase``
    any leftover overall phase.
    """

    theta: np.ndarray
    alpha0: float
    alpha1: float
    global_phase: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.theta) + 1

    def canonical_matrix(self) -> np.ndarray:
        blk = z_rotation_matrix(self.dim, self.theta)
        return scipy.linalg.block_diag(blk, blk.conj()).astype(complex)

    def matrix(self) -> np.ndarray:
        """Core including the control phases and the global phase."""
        phases = np.exp(1j * np.array([self.alpha0, self.alpha1]))
        full = kron(np.diag(phases), np.eye(self.dim)) @ self.canonical_matrix()
        return np.exp(1j * self.global_phase) * full


def decompose_controlled_2n(spec: ControlledGateSpec):
    """Split a controlled gate into locals and a canonical diagonal core.

    Returns ``(u_a, u_b, core, v_a, v_b)`` with
    ``(u_a (x) u_b) . core_canonical . (v_a (x) v_b)`` equal to the block gate.
    ``u_a`` is the diagonal phase gate carrying the core's control phases and
    ``v_a`` the identity.

    The construction eigendecomposes ``W = U0 U1^dag = U_B exp(i Phi) U_B^dag``,
    centers the phases (``Phi = mean + 2 L`` with L traceless, so the diagonal
    ``exp(i L)`` has determinant one), and solves for the remaining local.
    """
    u0, u1 = spec.blocks
    n = spec.target_dim
    w = u0 @ u1.conj().T
    lam, u_b = eig_unitary(w)
    phi = principal_phases(lam)
    mean = float(phi.mean())
    ell = (phi - mean) / 2.0

    alpha0 = mean / 2.0
    alpha1 = -mean / 2.0
    d = np.exp(1j * ell)
    v_b = (d.conj()[:, None] * u_b.conj().T) @ u0 * np.exp(-1j * alpha0)
    theta = -ell[1:]

    core = CanonicalCore2N(theta=theta, alpha0=alpha0, alpha1=alpha1, global_phase=0.0)
    u_a = np.diag(np.exp(1j * np.array([alpha0, alpha1])))
    v_a = np.eye(2, dtype=complex)
    return u_a, u_b, core, v_a, v_b


def compile_core_2n(core: CanonicalCore2N) -> cir.Circuit:
    """Compile the core into GCX-conjugated z rotations plus a control phase.

    Emits, for each k, the applied-order triple ``GCX(1 -> swap(0,k))``,
    z rotation by theta_k on the target, same GCX again, followed by the
    control-side phase gate; exactly 2(N-1) GCX gates and N-1 z rotations.
    """
    n = core.dim
    gates: list[cir.Gate] = []
    for k in range(1, n):
        angles = np.zeros(n - 1)
        angles[k - 1] = core.theta[k - 1]
        g = cir.gcx_gate("A", 1, (0, k))
        gates += [g, cir.z_gate("B", angles), g]
    gates.append(cir.control_phase_gate("A", (core.alpha0, core.alpha1)))
    if core.global_phase != 0.0:
        gates.append(cir.global_phase_gate(core.global_phase))
    c = cir.Circuit((2, n), tuple(gates), {"template": "controlled-core-2xN"})
    return cir.with_meta(c, counts=cir.count_gates(c).to_dict())


def local_rotation_gates(u, side: str) -> tuple[list[cir.Gate], float]:
    """Compile one local unitary into three rotation gates.

    Returns the applied-order gate list and the stripped phase, so the caller
    can accumulate it into a single global-phase gate. When the y-angle form
    of an orthogonal factor is unavailable the gate carries the matrix itself.
    """
    fact = kak_decompose(u)

    def ygate(mat, angles):
        if angles is not None:
            return cir.y_gate(side, angles=angles)
        return cir.y_gate(side, matrix=mat.astype(complex))

    gates = [
        ygate(fact.o2, fact.y_angles2),
        cir.z_gate(side, fact.z_angles),
        ygate(fact.o1, fact.y_angles1),
    ]
    return gates, fact.phase


def synthesize_controlled_2n(spec: ControlledGateSpec) -> cir.Circuit:
    """Full circuit for a controlled (2 x N) gate.

    Worst-case gate budget: 2(N-1) GCX, six qubit rotations for the two
    control-side locals, and N+5 target-side rotations (three each for the
    two target locals plus the N-1 core z rotations). Zero-angle gates are
    kept so the counts match the budget exactly; run :func:`circuit.optimize`
    to drop them.
    """
    n = spec.target_dim
    _, u_b, core, _, v_b = decompose_controlled_2n(spec)

    phase = core.global_phase
    core_gates = [g for g in compile_core_2n(core).gates if g.kind != cir.GATE_GLOBAL_PHASE]

    va_gates, p = local_rotation_gates(np.eye(2, dtype=complex), "A")
    phase += p
    vb_gates, p = local_rotation_gates(v_b, "B")
    phase += p
    ub_gates, p = local_rotation_gates(u_b, "B")
    phase += p
    ua_gates, p = local_rotation_gates(np.eye(2, dtype=complex), "A")
    phase += p

    gates = (*va_gates, *vb_gates, *core_gates, *ub_gates, *ua_gates,
             cir.global_phase_gate(phase))
    c = cir.Circuit((2, n), gates, {"template": "controlled-2xN"})
    return cir.with_meta(c, counts=cir.count_gates(c).to_dict())
