"""Command-line front end: synthesize, verify, schmidt, expand, selftest.

File formats: matrices are ``{"rows": r, "cols": c, "entries": [[re, im],
...]}`` row-major; circuits use the JSON schema of :mod:`gcxsynth.circuit`.
Every command is deterministic given its inputs and flags, errors come out
as machine-readable JSON, and the exit status encodes verification success
(0 ok, 1 tolerance failure, 2 invalid input).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import circuit as cir
from .controlled import ControlledGateSpec, synthesize_controlled_2n
from .diagonal import CanonicalCoreMN, DiagonalGateSpec, synthesize_diagonal_mn
from .linalg import (
    RANK_TOL,
    RECONSTRUCTION_TOL,
    NotUnitaryError,
    dist_up_to_global_phase,
    random_unitary,
)
from .schmidt import (
    expand_core_2n,
    expand_core_2x2,
    expand_core_3x3,
    expand_core_mn_numeric,
    schmidt_rank,
)


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj):
    sys.stdout.write(_dump(obj))


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise CliError("io_error", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError("parse_error", f"invalid JSON in {path}: {exc}") from exc


def _load_matrix(path: str) -> np.ndarray:
    obj = _load_json(path)
    try:
        return cir.matrix_from_obj(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError("parse_error", f"bad matrix file {path}: {exc}") from exc


def _matrix_from_entry(obj, what: str) -> np.ndarray:
    try:
        return cir.matrix_from_obj(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError("parse_error", f"bad matrix for {what}: {exc}") from exc


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_synthesize(args) -> int:
    spec_obj = _load_json(args.input)
    try:
        if "blocks" in spec_obj:
            blocks = tuple(_matrix_from_entry(b, f"block {i}")
                           for i, b in enumerate(spec_obj["blocks"]))
            spec = ControlledGateSpec(blocks)
            circ = synthesize_controlled_2n(spec)
            target = spec.matrix()
        elif "phases" in spec_obj:
            if "dims" not in spec_obj:
                raise CliError("bad_dims", "diagonal mode needs explicit dims [M, N]")
            m, n = (int(x) for x in spec_obj["dims"])
            locals_obj = spec_obj.get("locals", {})
            locals_kw = {
                key.lower(): _matrix_from_entry(val, key)
                for key, val in locals_obj.items()
            }
            spec = DiagonalGateSpec((m, n), np.asarray(spec_obj["phases"], dtype=float),
                                    **locals_kw)
            circ = synthesize_diagonal_mn(spec)
            target = spec.matrix()
        else:
            raise CliError("parse_error", "input needs either 'blocks' or 'phases'")
    except NotUnitaryError as exc:
        raise CliError("not_unitary", str(exc)) from exc
    except (ValueError, TypeError) as exc:
        raise CliError("invalid_input", str(exc)) from exc

    if args.optimize:
        circ = cir.optimize(circ)
    residual = dist_up_to_global_phase(cir.evaluate(circ), target)
    counts = cir.count_gates(circ).to_dict()
    circ = cir.with_meta(circ, counts=counts, residual=residual, tolerance=args.tol)
    _write_text(args.output, cir.serialize(circ))
    ok = residual <= args.tol
    _emit({"ok": ok, "residual": residual, "counts": counts, "output": args.output})
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    try:
        with open(args.circuit, "r", encoding="utf-8") as fh:
            circ = cir.parse(fh.read())
    except FileNotFoundError as exc:
        raise CliError("io_error", f"cannot read {args.circuit}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError("parse_error", f"bad circuit file {args.circuit}: {exc}") from exc
    target = _load_matrix(args.target)
    m, n = circ.dims
    if target.shape != (m * n, m * n):
        raise CliError("dimension_mismatch",
                       f"target shape {target.shape} does not match circuit dims {circ.dims}")
    residual = dist_up_to_global_phase(cir.evaluate(circ), target)
    counts = cir.count_gates(circ).to_dict()
    ok = residual <= args.tol
    _emit({"ok": ok, "residual": residual, "counts": counts})
    return 0 if ok else 1


def _cmd_schmidt(args) -> int:
    target = _load_matrix(args.matrix)
    m, n = args.dims
    if target.shape != (m * n, m * n):
        raise CliError("bad_dims",
                       f"matrix shape {target.shape} does not factor as ({m}x{n})^2")
    report = schmidt_rank(target, m, n, tol=args.rank_tol)
    _emit({
        "dims": [m, n],
        "singular_values": [float(s) for s in report.singular_values],
        "rank": report.rank,
        "k_har": report.k_har,
        "tolerance": report.tol,
    })
    return 0


def _term_obj(term) -> dict:
    return {
        "coefficient": [float(term.coefficient.real), float(term.coefficient.imag)],
        "a_factor": None if term.a_factor is None else term.a_factor.a,
        "b_factor": None if term.b_factor is None else term.b_factor.a,
    }


def _cmd_expand(args) -> int:
    obj = _load_json(args.input)
    try:
        m, n = (int(x) for x in obj["dims"])
        theta = obj["theta"]
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError("parse_error", f"expand input needs dims and theta: {exc}") from exc

    notice = None
    flat = isinstance(theta, (int, float)) or (
        isinstance(theta, list) and all(isinstance(x, (int, float)) for x in theta))
    if (m, n) == (2, 2) and flat:
        val = theta if isinstance(theta, (int, float)) else theta[0]
        expansion = expand_core_2x2(float(val))
    elif m == 2 and flat:
        if len(theta) != n - 1:
            raise CliError("bad_dims", f"2x{n} core needs {n - 1} angles, got {len(theta)}")
        expansion = expand_core_2n(theta)
    elif (m, n) == (3, 3) and flat:
        if len(theta) != 4:
            raise CliError("bad_dims", f"3x3 core needs 4 angles, got {len(theta)}")
        expansion = expand_core_3x3(theta)
    else:
        mat = np.asarray(theta, dtype=float)
        if mat.shape != (m - 1, n - 1):
            raise CliError("bad_dims",
                           f"{m}x{n} core needs a {m - 1}x{n - 1} angle matrix, got {mat.shape}")
        core = CanonicalCoreMN((m, n), mat, np.zeros(m - 1), np.zeros(n - 1))
        expansion = expand_core_mn_numeric(core)
        notice = "no closed form for these dims; coefficients fit numerically"

    target = _core_matrix(m, n, theta, expansion)
    residual = float(np.linalg.norm(expansion.matrix() - target))
    out = {
        "dims": [m, n],
        "method": expansion.source,
        "terms": [_term_obj(t) for t in expansion.terms],
        "residual": residual,
    }
    if notice:
        out["notice"] = notice
    text = _dump(out)
    if args.output:
        _write_text(args.output, text)
    sys.stdout.write(text)
    return 0


def _core_matrix(m: int, n: int, theta, expansion) -> np.ndarray:
    """Independent reconstruction of the core the expansion claims to expand."""
    from .generators import z_generator
    from .linalg import kron as _kron
    import scipy.linalg

    if m == 2 and (isinstance(theta, (int, float)) or np.ndim(theta) == 1):
        vec = np.atleast_1d(np.asarray(theta, dtype=float))
        h = sum(t * _kron(np.diag([1.0, -1.0]), z_generator(n, a + 2))
                for a, t in enumerate(vec))
        return scipy.linalg.expm(1j * h)
    if (m, n) == (3, 3) and np.ndim(theta) == 1:
        t1, t2, t3, t4 = (float(x) for x in theta)
        mat = np.array([[t1, t3], [t2, t4]])
    else:
        mat = np.asarray(theta, dtype=float)
    h = sum(mat[i, j] * _kron(z_generator(m, i + 2), z_generator(n, j + 2))
            for i in range(m - 1) for j in range(n - 1))
    return scipy.linalg.expm(1j * h)


def _selftest_case_controlled(n: int, rng) -> tuple[str, float, dict, bool]:
    spec = ControlledGateSpec((random_unitary(n, rng), random_unitary(n, rng)))
    circ = synthesize_controlled_2n(spec)
    residual = dist_up_to_global_phase(cir.evaluate(circ), spec.matrix())
    counts = cir.count_gates(circ)
    ok = (residual <= RECONSTRUCTION_TOL and counts.gcx == 2 * (n - 1)
          and counts.rotations_a == 6 and counts.rotations_b == n + 5)
    return f"controlled-2x{n}", residual, counts.to_dict(), ok


def _selftest_case_diagonal(m: int, n: int, rng) -> tuple[str, float, dict, bool]:
    spec = DiagonalGateSpec(
        (m, n),
        rng.uniform(-np.pi, np.pi, m * n),
        u_a=random_unitary(m, rng), u_b=random_unitary(n, rng),
        v_a=random_unitary(m, rng), v_b=random_unitary(n, rng),
    )
    circ = synthesize_diagonal_mn(spec)
    residual = dist_up_to_global_phase(cir.evaluate(circ), spec.matrix())
    counts = cir.count_gates(circ)
    ok = (residual <= RECONSTRUCTION_TOL and counts.gcx == 2 * m * (n - 1)
          and counts.rotation_types_total == 2 * m * (n - 1) + 10)
    return f"diagonal-{m}x{n}", residual, counts.to_dict(), ok


def _cmd_selftest(args) -> int:
    m, n = args.dims
    rows = []
    for i in range(args.cases):
        rng = np.random.default_rng([args.seed, i])
        if m == 2:
            rows.append((i, *_selftest_case_controlled(n, rng)))
        rows.append((i, *_selftest_case_diagonal(m, n, rng)))
    all_ok = all(ok for *_, ok in rows)
    for i, name, residual, counts, ok in rows:
        status = "PASS" if ok else "FAIL"
        print(f"{name:<18} case {i:<3} {status}  residual={residual:.3e}  gcx={counts['gcx']}")
    print(f"selftest {'PASS' if all_ok else 'FAIL'}: {len(rows)} cases, "
          f"dims {m}x{n}, seed {args.seed}")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcxsynth",
        description="Compile bipartite controlled/diagonal gates to GCX circuits "
                    "and analyze operator Schmidt rank.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="compile a gate spec file to a circuit file")
    p.add_argument("input", help="JSON spec: {'blocks': [...]} or {'dims', 'phases', 'locals'}")
    p.add_argument("-o", "--output", required=True, help="circuit JSON output path")
    p.add_argument("--tol", type=float, default=RECONSTRUCTION_TOL)
    p.add_argument("--optimize", action="store_true",
                   help="drop zero-angle rotations and cancelling GCX pairs")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("verify", help="evaluate a circuit against a target matrix")
    p.add_argument("circuit")
    p.add_argument("target")
    p.add_argument("--tol", type=float, default=RECONSTRUCTION_TOL)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("schmidt", help="operator Schmidt spectrum and rank of a matrix")
    p.add_argument("matrix")
    p.add_argument("--dims", type=int, nargs=2, required=True, metavar=("M", "N"))
    p.add_argument("--rank-tol", type=float, default=RANK_TOL)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=_cmd_schmidt)

    p = sub.add_parser("expand", help="product-operator expansion of a diagonal core")
    p.add_argument("input", help="JSON: {'dims': [M, N], 'theta': ...}")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("selftest", help="random round-trip corpus with a pass/fail table")
    p.add_argument("--dims", type=int, nargs=2, default=(2, 3), metavar=("M", "N"))
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _emit({"error": {"kind": exc.kind, "message": str(exc)}})
        return 2
    except NotUnitaryError as exc:
        _emit({"error": {"kind": "not_unitary", "message": str(exc)}})
        return 2


if __name__ == "__main__":
    sys.exit(main())
