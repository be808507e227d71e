"""Synthesis of gates locally equivalent to a diagonal unitary on (M x N).

The diagonal's phase vector is fit over the commuting basis of products of
z-kind generators, splitting it into a global phase, one-sided z rotations
(absorbed by the neighboring locals) and the genuinely nonlocal core. Each
core term compiles into a pair of single-controlled z rotations, each of
which costs two GCX gates and two z rotations; the control-value-0 rotations
targeting the same level pair merge, for 2M(N-1) GCX gates total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuit as cir
from .controlled import local_rotation_gates
from .generators import diagonal_product_basis, identity, z_rotation_matrix
from .linalg import UNITARITY_TOL, kron, require_unitary


@dataclass(frozen=True)
class DiagonalGateSpec:
    """Diagonal phases plus optional sandwich locals.

    ``phases`` has length M*N, row-major over (A level, B level). Locals
    default to identities; when supplied they must be unitary and sized to
    their side.
    """

    dims: tuple[int, int]
    phases: np.ndarray
    u_a: np.ndarray | None = None
    u_b: np.ndarray | None = None
    v_a: np.ndarray | None = None
    v_b: np.ndarray | None = None

    def __post_init__(self):
        m, n = self.dims
        if m < 2 or n < 2:
            raise ValueError(f"both dimensions must be >= 2, got {self.dims}")
        phases = np.asarray(self.phases, dtype=float)
        if phases.shape != (m * n,):
            raise ValueError(f"expected {m * n} phases, got shape {phases.shape}")
        object.__setattr__(self, "phases", phases)
        for name, dim in (("u_a", m), ("u_b", n), ("v_a", m), ("v_b", n)):
            val = getattr(self, name)
            if val is None:
                object.__setattr__(self, name, identity(dim))
            else:
                val = require_unitary(val, UNITARITY_TOL, name)
                if val.shape != (dim, dim):
                    raise ValueError(f"{name} must be {dim}x{dim}, got {val.shape}")
                object.__setattr__(self, name, val)

    def diagonal_matrix(self) -> np.ndarray:
        return np.diag(np.exp(1j * self.phases))

    def matrix(self) -> np.ndarray:
        """The sandwiched gate (U_A (x) U_B) . diag . (V_A (x) V_B)."""
        return kron(self.u_a, self.u_b) @ self.diagonal_matrix() @ kron(self.v_a, self.v_b)


@dataclass(frozen=True)
class CanonicalCoreMN:
    """Nonlocal core parameters of a diagonal (M x N) gate.

    ``theta[i, j]`` weighs the product of the A-side z generator at level
    ``i + 2`` with the B-side one at level ``j + 2``. ``mu`` / ``nu`` are the
    one-sided z angles split off for absorption and ``global_phase`` the
    scalar part.
    """

    dims: tuple[int, int]
    theta: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    global_phase: float = 0.0

    def canonical_phase_vector(self) -> np.ndarray:
        m, n = self.dims
        phases = np.zeros(m * n)
        for _, _, at, a, vec in _product_entries(m, n):
            phases += self.theta[at - 2, a - 2] * vec
        return phases

    def canonical_matrix(self) -> np.ndarray:
        """The purely nonlocal diagonal ``exp(i sum theta_ij Z_i (x) Z_j)``."""
        return np.diag(np.exp(1j * self.canonical_phase_vector()))

    def full_matrix(self) -> np.ndarray:
        """Reconstruct the diagonal including absorbed angles and phase."""
        m, n = self.dims
        za = z_rotation_matrix(m, self.mu)
        zb = z_rotation_matrix(n, self.nu)
        return np.exp(1j * self.global_phase) * kron(za, zb) @ self.canonical_matrix()


def _product_entries(m: int, n: int):
    """(flat_i, flat_j, atilde, a, diag_vector) for the product basis entries."""
    basis = diagonal_product_basis(m, n)
    out = []
    for at_idx, a_idx, vec in basis:
        if at_idx is not None and a_idx is not None:
            out.append((at_idx - 2, a_idx - 2, at_idx, a_idx, vec))
    return out


def fit_core_mn(spec: DiagonalGateSpec) -> CanonicalCoreMN:
    """Solve for the core parameters reproducing the spec's phase vector.

    The M*N diagonal basis (identity, one-sided z kinds, their products) is
    square and nonsingular, so the fit is an exact linear solve; the residual
    is checked modulo 2*pi.
    """
    m, n = spec.dims
    basis = diagonal_product_basis(m, n)
    a_mat = np.stack([vec for _, _, vec in basis], axis=1)
    coef = np.linalg.solve(a_mat, spec.phases)

    resid = a_mat @ coef - spec.phases
    wrapped = (resid + np.pi) % (2.0 * np.pi) - np.pi
    if np.max(np.abs(wrapped)) > 1e-10:
        raise ValueError(f"phase fit residual {np.max(np.abs(wrapped)):.2e} exceeds tolerance")

    g = float(coef[0])
    nu = coef[1 : n]
    mu = coef[n : n + m - 1]
    theta = coef[n + m - 1 :].reshape(m - 1, n - 1)
    return CanonicalCoreMN((m, n), theta, mu, nu, g)


def _lambda_block(control_value: int, a: int, theta: float, n: int,
                  form: str, tag_boundary: bool) -> list[cir.Gate]:
    """Gates of one single-controlled z rotation, two GCX + two z rotations.

    ``form`` picks which of the two equivalent orderings is used: "leading"
    puts the half-angle rotation first (next to the V-side locals), "trailing"
    puts it last (next to the U-side locals). ``tag_boundary`` marks that
    half-angle rotation absorbable.
    """
    plus = np.zeros(n - 1)
    plus[a - 2] = theta / 2.0
    minus = -plus
    g = cir.gcx_gate("A", control_value, (0, a - 1))
    tags = ("absorbable",) if tag_boundary else ()
    if form == "leading":
        return [cir.z_gate("B", plus, tags), g, cir.z_gate("B", minus), g]
    if form == "trailing":
        return [g, cir.z_gate("B", minus), g, cir.z_gate("B", plus, tags)]
    raise ValueError(f"unknown block form {form!r}")


def _core_block_params(core: CanonicalCoreMN) -> list[tuple[int, int, float]]:
    """Applied-order (control_value, target_level, angle) of the core blocks.

    The control-value-0 blocks carry the merged angle sums and come last; the
    per-value blocks carry the negated individual angles.
    """
    m, n = core.dims
    params = [
        (at - 1, a, -float(core.theta[at - 2, a - 2]))
        for at in range(m, 1, -1)
        for a in range(n, 1, -1)
    ]
    params += [(0, a, float(core.theta[:, a - 2].sum())) for a in range(n, 1, -1)]
    return params


def compile_core_mn(core: CanonicalCoreMN) -> cir.Circuit:
    """Compile the nonlocal core into its M(N-1) controlled-rotation blocks.

    Exactly 2M(N-1) GCX gates and as many z rotations; the two half-angle
    rotations at the circuit boundary are tagged absorbable but kept, so the
    evaluated product equals the canonical core matrix.
    """
    m, n = core.dims
    params = _core_block_params(core)
    gates: list[cir.Gate] = []
    last = len(params) - 1
    for i, (cv, a, th) in enumerate(params):
        form = "leading" if i == 0 else "trailing"
        gates += _lambda_block(cv, a, th, n, form, tag_boundary=i in (0, last))
    c = cir.Circuit((m, n), tuple(gates), {"template": "diagonal-core-MxN"})
    return cir.with_meta(c, counts=cir.count_gates(c).to_dict())


def synthesize_diagonal_mn(spec: DiagonalGateSpec, absorb: bool = True) -> cir.Circuit:
    """Full circuit for a locally-diagonal (M x N) gate.

    With ``absorb`` (the default) the two boundary half-angle rotations and
    the one-sided fit angles fold into the neighboring locals before those are
    compiled, giving the worst-case budget of 2M(N-1) GCX gates and
    2M(N-1) + 10 rotations. With ``absorb=False`` everything is emitted
    verbatim; both variants evaluate to the same matrix.
    """
    m, n = spec.dims
    core = fit_core_mn(spec)
    core_gates = list(compile_core_mn(core).gates)

    u_a_eff = spec.u_a @ z_rotation_matrix(m, core.mu)
    u_b_eff = spec.u_b @ z_rotation_matrix(n, core.nu)
    v_a_eff = spec.v_a
    v_b_eff = spec.v_b
    extra: list[cir.Gate] = []
    absorbed = 0

    if absorb:
        first, last = core_gates[0], core_gates[-1]
        assert "absorbable" in first.tags and "absorbable" in last.tags
        core_gates = core_gates[1:-1]
        v_b_eff = z_rotation_matrix(n, first.angles) @ v_b_eff
        u_b_eff = u_b_eff @ z_rotation_matrix(n, last.angles)
        absorbed = 2
    else:
        u_a_eff = spec.u_a
        u_b_eff = spec.u_b
        extra = [cir.z_gate("B", core.nu), cir.z_gate("A", core.mu)]

    phase = core.global_phase
    va_gates, p = local_rotation_gates(v_a_eff, "A")
    phase += p
    vb_gates, p = local_rotation_gates(v_b_eff, "B")
    phase += p
    ub_gates, p = local_rotation_gates(u_b_eff, "B")
    phase += p
    ua_gates, p = local_rotation_gates(u_a_eff, "A")
    phase += p

    gates = (*va_gates, *vb_gates, *core_gates, *extra, *ub_gates, *ua_gates,
             cir.global_phase_gate(phase))
    c = cir.Circuit((m, n), gates, {"template": "diagonal-MxN", "absorbed": absorbed})
    return cir.with_meta(c, counts=cir.count_gates(c).to_dict())
