"""Two-party circuit IR: gate records, evaluation, counting, peephole, JSON.

A :class:`Circuit` is an ordered gate list on a register of dimensions
``(M, N)``. The list order is application order: the leftmost gate acts
first, i.e. it is the rightmost factor of the evaluated matrix product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import generators
from .linalg import as_matrix, frobenius

GATE_GCX = "gcx"
GATE_Y = "y_rotation"
GATE_Z = "z_rotation"
GATE_LOCAL = "local_unitary"
GATE_CONTROL_PHASE = "control_phase"
GATE_GLOBAL_PHASE = "global_phase"

#: Angle magnitude below which a rotation counts as the identity for peephole.
ZERO_ANGLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate record; which fields apply depends on ``kind``.

    ``side`` is ``"A"`` or ``"B"`` (``None`` for global phases). Rotations
    carry ``angles`` (or an explicit ``matrix`` payload for y rotations whose
    angle form is unavailable); GCX carries the control value and swap pair,
    with ``side`` naming the controlling party.
    """

    kind: str
    side: str | None = None
    angles: tuple[float, ...] | None = None
    matrix: np.ndarray | None = None
    control_value: int | None = None
    swap: tuple[int, int] | None = None
    phases: tuple[float, ...] | None = None
    phase: float | None = None
    tags: tuple[str, ...] = ()

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.side, self.angles, self.control_value, self.swap,
                self.phases, self.phase, self.tags) != (
                other.kind, other.side, other.angles, other.control_value,
                other.swap, other.phases, other.phase, other.tags):
            return False
        if (self.matrix is None) != (other.matrix is None):
            return False
        return self.matrix is None or np.array_equal(self.matrix, other.matrix)


def gcx_gate(side: str, control_value: int, swap: tuple[int, int], tags=()) -> Gate:
    return Gate(GATE_GCX, side=side, control_value=int(control_value),
                swap=(int(swap[0]), int(swap[1])), tags=tuple(tags))


def y_gate(side: str, angles=None, matrix=None, tags=()) -> Gate:
    if (angles is None) == (matrix is None):
        raise ValueError("y gate needs exactly one of angles or matrix")
    return Gate(GATE_Y, side=side,
                angles=None if angles is None else tuple(float(a) for a in angles),
                matrix=None if matrix is None else as_matrix(matrix),
                tags=tuple(tags))


def z_gate(side: str, angles, tags=()) -> Gate:
    return Gate(GATE_Z, side=side, angles=tuple(float(a) for a in angles), tags=tuple(tags))


def local_gate(side: str, matrix, tags=()) -> Gate:
    return Gate(GATE_LOCAL, side=side, matrix=as_matrix(matrix), tags=tuple(tags))


def control_phase_gate(side: str, phases, tags=()) -> Gate:
    return Gate(GATE_CONTROL_PHASE, side=side,
                phases=tuple(float(p) for p in phases), tags=tuple(tags))


def global_phase_gate(phase: float, tags=()) -> Gate:
    return Gate(GATE_GLOBAL_PHASE, phase=float(phase), tags=tuple(tags))


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on a two-party register of dimensions ``dims``."""

    dims: tuple[int, int]
    gates: tuple[Gate, ...]
    meta: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.dims == other.dims and list(self.gates) == list(other.gates)

    def __len__(self):
        return len(self.gates)


def _side_dim(gate: Gate, dims: tuple[int, int]) -> int:
    return dims[0] if gate.side == "A" else dims[1]


def gate_matrix(gate: Gate, dims: tuple[int, int]) -> np.ndarray:
    """Full-register matrix of one gate via the side-appropriate embedding."""
    m, n = dims
    if gate.kind == GATE_GLOBAL_PHASE:
        return np.exp(1j * gate.phase) * np.eye(m * n, dtype=complex)
    if gate.kind == GATE_GCX:
        if gate.side == "A":
            return generators.gcx_matrix(m, n, gate.control_value, gate.swap, "A")
        return generators.gcx_matrix(n, m, gate.control_value, gate.swap, "B")
    d = _side_dim(gate, dims)
    if gate.kind == GATE_Y:
        local = gate.matrix if gate.matrix is not None else generators.y_rotation_matrix(d, gate.angles)
    elif gate.kind == GATE_Z:
        local = generators.z_rotation_matrix(d, gate.angles)
    elif gate.kind == GATE_LOCAL:
        local = gate.matrix
    elif gate.kind == GATE_CONTROL_PHASE:
        if len(gate.phases) != d:
            raise ValueError(f"control phase gate needs {d} phases, got {len(gate.phases)}")
        local = np.diag(np.exp(1j * np.asarray(gate.phases)))
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    if local.shape != (d, d):
        raise ValueError(f"gate matrix shape {local.shape} does not fit side dim {d}")
    return generators.embed(gate.side, local, m, n)


def evaluate(circuit: Circuit) -> np.ndarray:
    """Ordered product of the gate matrices (first gate = rightmost factor)."""
    m, n = circuit.dims
    total = np.eye(m * n, dtype=complex)
    for gate in circuit.gates:
        total = gate_matrix(gate, circuit.dims) @ total
    return total


@dataclass(frozen=True)
class CountReport:
    """Per-kind gate counts plus the rotation bookkeeping conventions.

    Matrix-valued local gates are attributed three rotations each (the
    single-partite factorization guarantee), which is what ``rotations_a`` /
    ``rotations_b`` report. Control-phase and global-phase gates are tallied
    separately and never count as rotations.
    """

    gcx: int = 0
    rotation_gates_a: int = 0
    rotation_gates_b: int = 0
    locals_a: int = 0
    locals_b: int = 0
    control_phases: int = 0
    global_phases: int = 0

    @property
    def rotations_a(self) -> int:
        return self.rotation_gates_a + 3 * self.locals_a

    @property
    def rotations_b(self) -> int:
        return self.rotation_gates_b + 3 * self.locals_b

    @property
    def rotation_types_total(self) -> int:
        return self.rotations_a + self.rotations_b

    def to_dict(self) -> dict:
        return {
            "gcx": self.gcx,
            "rotations_a": self.rotations_a,
            "rotations_b": self.rotations_b,
            "rotation_types_total": self.rotation_types_total,
            "rotation_gates_a": self.rotation_gates_a,
            "rotation_gates_b": self.rotation_gates_b,
            "locals_a": self.locals_a,
            "locals_b": self.locals_b,
            "control_phases": self.control_phases,
            "global_phases": self.global_phases,
        }


def count_gates(circuit: Circuit) -> CountReport:
    """Exact per-kind counts of the emitted gates."""
    c = {"gcx": 0, "rotation_gates_a": 0, "rotation_gates_b": 0,
         "locals_a": 0, "locals_b": 0, "control_phases": 0, "global_phases": 0}
    for g in circuit.gates:
        if g.kind == GATE_GCX:
            c["gcx"] += 1
        elif g.kind in (GATE_Y, GATE_Z):
            c["rotation_gates_a" if g.side == "A" else "rotation_gates_b"] += 1
        elif g.kind == GATE_LOCAL:
            c["locals_a" if g.side == "A" else "locals_b"] += 1
        elif g.kind == GATE_CONTROL_PHASE:
            c["control_phases"] += 1
        elif g.kind == GATE_GLOBAL_PHASE:
            c["global_phases"] += 1
    return CountReport(**c)


def _is_identity_gate(gate: Gate, dims: tuple[int, int]) -> bool:
    if gate.kind in (GATE_Y, GATE_Z) and gate.angles is not None:
        return all(abs(a) <= ZERO_ANGLE_TOL for a in gate.angles)
    if gate.kind == GATE_CONTROL_PHASE:
        return all(abs(p) <= ZERO_ANGLE_TOL for p in gate.phases)
    if gate.kind == GATE_GLOBAL_PHASE:
        return abs(gate.phase) <= ZERO_ANGLE_TOL
    if gate.kind in (GATE_LOCAL, GATE_Y) and gate.matrix is not None:
        return frobenius(gate.matrix - np.eye(gate.matrix.shape[0])) <= ZERO_ANGLE_TOL
    return False


def _same_gcx(a: Gate, b: Gate) -> bool:
    return (a.kind == b.kind == GATE_GCX and a.side == b.side
            and a.control_value == b.control_value and a.swap == b.swap)


def optimize(circuit: Circuit) -> Circuit:
    """Drop identity gates and cancel adjacent identical GCX pairs.

    Pure peephole: evaluation is unchanged up to the dropped near-zero angles.
    Runs to a fixpoint, so a removed rotation exposes its surrounding GCX pair
    for cancellation.
    """
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        kept = [g for g in gates if not _is_identity_gate(g, circuit.dims)]
        if len(kept) != len(gates):
            changed = True
        gates = kept
        out: list[Gate] = []
        for g in gates:
            if out and _same_gcx(out[-1], g):
                out.pop()
                changed = True
            else:
                out.append(g)
        gates = out
    meta = dict(circuit.meta)
    meta["optimized"] = True
    return Circuit(circuit.dims, tuple(gates), meta)


# ---------------------------------------------------------------------------
# JSON serialization. Top level: {"dims": [M, N], "gates": [...], "meta": {}}
# with gate records {"kind": ..., "side": ..., "params": {...}}; complex
# scalars are stored as [re, im] pairs.
# ---------------------------------------------------------------------------

def matrix_to_obj(m) -> dict:
    m = as_matrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_obj(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"matrix object claims {rows}x{cols} but has {len(entries)} entries")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(rows, cols)


def _gate_to_obj(gate: Gate) -> dict:
    params: dict = {}
    if gate.kind == GATE_GCX:
        params = {"control_value": gate.control_value, "swap": list(gate.swap)}
    elif gate.kind in (GATE_Y, GATE_Z):
        if gate.angles is not None:
            params = {"angles": [float(a) for a in gate.angles]}
        else:
            params = {"matrix": matrix_to_obj(gate.matrix)}
    elif gate.kind == GATE_LOCAL:
        params = {"matrix": matrix_to_obj(gate.matrix)}
    elif gate.kind == GATE_CONTROL_PHASE:
        params = {"phases": [float(p) for p in gate.phases]}
    elif gate.kind == GATE_GLOBAL_PHASE:
        params = {"phase": float(gate.phase)}
    obj = {"kind": gate.kind, "side": gate.side, "params": params}
    if gate.tags:
        obj["tags"] = list(gate.tags)
    return obj


def _gate_from_obj(obj: dict) -> Gate:
    kind = obj["kind"]
    side = obj.get("side")
    params = obj.get("params", {})
    tags = tuple(obj.get("tags", ()))
    if kind == GATE_GCX:
        return gcx_gate(side, params["control_value"], tuple(params["swap"]), tags)
    if kind == GATE_Y:
        if "angles" in params:
            return y_gate(side, angles=params["angles"], tags=tags)
        return y_gate(side, matrix=matrix_from_obj(params["matrix"]), tags=tags)
    if kind == GATE_Z:
        return z_gate(side, params["angles"], tags)
    if kind == GATE_LOCAL:
        return local_gate(side, matrix_from_obj(params["matrix"]), tags)
    if kind == GATE_CONTROL_PHASE:
        return control_phase_gate(side, params["phases"], tags)
    if kind == GATE_GLOBAL_PHASE:
        return global_phase_gate(params["phase"], tags)
    raise ValueError(f"unknown gate kind {kind!r}")


def circuit_to_obj(circuit: Circuit) -> dict:
    return {
        "dims": [int(circuit.dims[0]), int(circuit.dims[1])],
        "gates": [_gate_to_obj(g) for g in circuit.gates],
        "meta": circuit.meta,
    }


def circuit_from_obj(obj: dict) -> Circuit:
    dims = (int(obj["dims"][0]), int(obj["dims"][1]))
    gates = tuple(_gate_from_obj(g) for g in obj["gates"])
    return Circuit(dims, gates, dict(obj.get("meta", {})))


def serialize(circuit: Circuit) -> str:
    return json.dumps(circuit_to_obj(circuit), sort_keys=True, indent=2) + "\n"


def parse(text: str) -> Circuit:
    return circuit_from_obj(json.loads(text))


def with_meta(circuit: Circuit, **entries) -> Circuit:
    meta = dict(circuit.meta)
    meta.update(entries)
    return replace(circuit, meta=meta)
