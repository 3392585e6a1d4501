"""Command-line front end and the JSON formats it reads and writes.

Exit codes: 0 YES/accept, 1 error, 2 NO/reject, 3 indeterminate.

Instance JSON::

    {"n": 3, "k": 3, "terms": [{"qubits": [0, 1, 2], "matrix": [[[re, im], ...], ...]}],
     "eta1": "0.0", ..., "delta": "0.0009765625", "l": 1, "m": 8,
     "psi": [[re, im], ...], "phi": [[re, im], ...]}

Real parameters are decimal strings so they survive a round trip
bit-for-bit. Witnesses are lists of ``{"qubits", "matrix"}`` or
``{"qubits", "netIndex"}``; pair proofs for the two-local proof system
are lists of ``{"qubits", "coords"}``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .korth import k_orth_density, k_orth_states, max_partial_overlap
from .nets import NetIndex, SingleQubitNet, net_element, net_snap
from .qcore import (
    TOL,
    LocalHamiltonian,
    LocalOperator,
    StateVector,
    haar_unitary,
    spectral_norm,
)
from .reductions import parse_dimacs, stconn_bfs, stconn_to_gscon
from .traversal import StaircaseParams, ghz_projectors, staircase_full, traversal_report
from .verify import (
    GsconInstance,
    GuardExceeded,
    SearchGuard,
    Verdict,
    pspace_search,
    qcma_verifier_sim,
    verify_witness,
)

EXIT_YES, EXIT_ERROR, EXIT_NO, EXIT_INDETERMINATE = 0, 1, 2, 3
_VERDICT_EXIT = {Verdict.YES: EXIT_YES, Verdict.NO: EXIT_NO, Verdict.INDETERMINATE: EXIT_INDETERMINATE}


class SchemaError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for NO verdicts."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# encoding


def _num(s) -> float:
    if isinstance(s, bool) or not isinstance(s, (str, int, float)):
        raise SchemaError(f"expected a decimal string, got {s!r}")
    try:
        return float(s)
    except ValueError as exc:
        raise SchemaError(f"not a decimal number: {s!r}") from exc


def encode_matrix(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(rows) -> np.ndarray:
    try:
        M = np.array([[complex(_num(re), _num(im)) for re, im in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed matrix: {exc}") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SchemaError("matrix must be square")
    return M


def encode_state(s: StateVector) -> list:
    return [[float(z.real), float(z.imag)] for z in s.amps]


def decode_state(data) -> StateVector:
    if isinstance(data, str):
        if set(data) - {"0", "1"} or not data:
            raise SchemaError(f"bad basis-state string {data!r}")
        return StateVector.basis(data)
    try:
        amps = np.array([complex(_num(re), _num(im)) for re, im in data])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed amplitudes: {exc}") from exc
    try:
        return StateVector.from_amplitudes(amps, normalize=False)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def instance_to_json(inst: GsconInstance) -> dict:
    return {
        "n": inst.n,
        "k": inst.k,
        "terms": [{"qubits": list(t.qubits), "matrix": encode_matrix(t.matrix)} for t in inst.H.terms],
        "eta1": repr(float(inst.eta1)),
        "eta2": repr(float(inst.eta2)),
        "eta3": repr(float(inst.eta3)),
        "eta4": repr(float(inst.eta4)),
        "delta": repr(float(inst.delta)),
        "l": inst.l,
        "m": inst.m,
        "psi": encode_state(inst.psi),
        "phi": encode_state(inst.phi),
    }


def instance_from_json(d: dict) -> GsconInstance:
    try:
        n = int(d["n"])
        terms = tuple(LocalOperator(tuple(t["qubits"]), decode_matrix(t["matrix"])) for t in d["terms"])
        H = LocalHamiltonian(n, terms)
        inst = GsconInstance(
            H=H,
            eta1=_num(d["eta1"]),
            eta2=_num(d["eta2"]),
            eta3=_num(d["eta3"]),
            eta4=_num(d["eta4"]),
            delta=_num(d["delta"]),
            l=int(d["l"]),
            m=int(d["m"]),
            psi=decode_state(d["psi"]),
            phi=decode_state(d["phi"]),
            k=int(d["k"]) if "k" in d else None,
        )
    except KeyError as exc:
        raise SchemaError(f"instance is missing field {exc}") from exc
    except (TypeError, IndexError) as exc:
        raise SchemaError(f"malformed instance: {exc}") from exc
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return inst


def witness_to_json(ops, net: SingleQubitNet | None = None) -> list:
    if net is None:
        return [{"qubits": list(op.qubits), "matrix": encode_matrix(op.matrix)} for op in ops]
    return [{"qubits": list(op.qubits), "netIndex": list(net_snap(net, op.matrix))} for op in ops]


def witness_from_json(items, net: SingleQubitNet | None = None) -> list[LocalOperator]:
    if not isinstance(items, list):
        raise SchemaError("witness must be a list")
    ops = []
    for it in items:
        try:
            qubits = tuple(int(q) for q in it["qubits"])
            if "matrix" in it:
                M = decode_matrix(it["matrix"])
            elif "netIndex" in it:
                if net is None:
                    raise SchemaError("net-index witness needs --grid or --net-eps")
                M = net_element(net, NetIndex(*[int(v) for v in it["netIndex"]]))
            else:
                raise SchemaError("witness entry needs 'matrix' or 'netIndex'")
            ops.append(LocalOperator(qubits, M))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed witness entry: {exc}") from exc
        except IndexError as exc:
            raise SchemaError(str(exc)) from exc
    return ops


def proof_to_json(proof) -> list:
    return [{"qubits": list(q), "coords": np.asarray(c).tolist()} for q, c in proof]


def proof_from_json(items) -> list[tuple]:
    try:
        return [(tuple(int(q) for q in it["qubits"]), np.array(it["coords"], dtype=np.int64)) for it in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed proof: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _net_from_args(args) -> SingleQubitNet | None:
    if getattr(args, "grid", None):
        nx, nphase = (int(v) for v in args.grid.split(","))
        return SingleQubitNet.from_grid(nx, nphase)
    if getattr(args, "net_eps", None) is not None:
        return SingleQubitNet.from_eps(args.net_eps)
    return None


# --------------------------------------------------------------------------
# commands


def staircase_rows(deltas) -> list[dict]:
    v, w = StateVector.basis("000"), StateVector.basis("111")
    S, T = ghz_projectors()
    rows = []
    for d in deltas:
        seq = staircase_full(StaircaseParams(d))
        rep = traversal_report(v, w, seq, S, T, k_orthogonal=True)
        rows.append({"delta": d, "m": rep.m, "max_overlap": rep.max_overlap, "final_distance": rep.eps})
    return rows


def cmd_staircase(args) -> int:
    deltas = [float(x) for x in args.sweep.split(",")] if args.sweep else [args.delta]
    rows = staircase_rows(deltas)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["delta", "m", "max_overlap", "final_distance"], lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = dumps({"rows": [{k: repr(v) if isinstance(v, float) else v for k, v in r.items()} for r in rows]})
    _emit(text, args.out)
    if args.emit_sequence:
        Path(args.emit_sequence).write_text(dumps(witness_to_json(staircase_full(StaircaseParams(deltas[0])))))
    return EXIT_YES


def cmd_reduce_stconn(args) -> int:
    phi = parse_dimacs(Path(args.cnf).read_text())
    red = stconn_to_gscon(phi, args.x, args.y)
    _emit(dumps(instance_to_json(red.instance)), args.out)
    connected, path = stconn_bfs(phi, args.x, args.y)
    if not connected:
        print("x and y are not connected through satisfying assignments", file=sys.stderr)
        return EXIT_NO
    if args.emit_witness:
        Path(args.emit_witness).write_text(dumps(witness_to_json(red.witness(path).ops)))
    return EXIT_YES


def cmd_verify(args) -> int:
    inst = instance_from_json(_load_json(args.instance))
    ops = witness_from_json(_load_json(args.witness), _net_from_args(args))
    rep = verify_witness(inst, ops)
    report = {
        "verdict": rep.verdict.value,
        "energies": [repr(e) for e in rep.energies],
        "final_distance": repr(rep.final_distance),
        "first_violation": rep.first_violation,
    }
    _emit(dumps(report), args.out)
    return _VERDICT_EXIT[rep.verdict]


def cmd_qcma_sim(args) -> int:
    inst = instance_from_json(_load_json(args.instance))
    res = qcma_verifier_sim(inst, proof_from_json(_load_json(args.proof)))
    report = {"accepted": res.accepted, "reason": res.reason, "eps": repr(res.eps), "step": res.step}
    _emit(dumps(report), args.out)
    return EXIT_YES if res.accepted else EXIT_NO


def cmd_pspace_search(args) -> int:
    inst = instance_from_json(_load_json(args.instance))
    net = _net_from_args(args)
    if net is None:
        raise SchemaError("pspace-search needs --grid or --net-eps")
    res = pspace_search(inst, net, SearchGuard(max_configs=args.max_configs))
    report = {
        "accepted": res.accepted,
        "path": [{"qubit": q, "netIndex": list(b)} for q, b in res.path],
        "alg_eps": repr(res.alg_eps),
        "energy_threshold": repr(res.energy_threshold),
        "proximity_threshold": repr(res.proximity_threshold),
        "explored": res.explored,
    }
    _emit(dumps(report), args.out)
    return EXIT_YES if res.accepted else EXIT_NO


def _state_arg(value: str) -> StateVector:
    if set(value) <= {"0", "1"}:
        return StateVector.basis(value)
    return decode_state(_load_json(value))


def cmd_korth(args) -> int:
    v, w = _state_arg(args.v), _state_arg(args.w)
    via_outer = k_orth_states(v, w, args.k, args.tol)
    via_density = k_orth_density(v, w, args.k, args.tol)
    worst, subset = max_partial_overlap(v, w, args.k)
    report = {
        "k": args.k,
        "k_orthogonal": via_outer,
        "density_agrees": via_outer == via_density,
        "max_partial_trace_norm": repr(worst),
        "worst_subset": list(subset),
    }
    _emit(dumps(report), args.out)
    return EXIT_YES if via_outer else EXIT_NO


def cmd_net_test(args) -> int:
    net = SingleQubitNet.from_eps(args.eps)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        U = haar_unitary(2, rng)
        worst = max(worst, spectral_norm(U - net_element(net, net_snap(net, U))))
    report = {"eps": repr(args.eps), "samples": args.samples, "seed": args.seed, "worst_distance": repr(worst), "covered": worst <= args.eps}
    _emit(dumps(report), args.out)
    return EXIT_YES if worst <= args.eps else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gscon", description="Ground-state connectivity constructions and deciders.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("staircase", help="build the 2-local staircase from |000> to |111>")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", type=float)
    g.add_argument("--sweep", help="comma-separated Delta values")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.add_argument("--emit-sequence", help="write the first sequence as witness JSON")
    s.set_defaults(func=cmd_staircase)

    s = sub.add_parser("reduce-stconn", help="3-CNF reconfiguration to a GSCON instance")
    s.add_argument("--cnf", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--out")
    s.add_argument("--emit-witness")
    s.set_defaults(func=cmd_reduce_stconn)

    s = sub.add_parser("verify", help="check a witness sequence")
    s.add_argument("--instance", required=True)
    s.add_argument("--witness", required=True)
    s.add_argument("--grid", help="NX,NPHASE of the net for netIndex witnesses")
    s.add_argument("--net-eps", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("qcma-sim", help="run the two-local proof system on a pseudo-net proof")
    s.add_argument("--instance", required=True)
    s.add_argument("--proof", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_qcma_sim)

    s = sub.add_parser("pspace-search", help="search one-local sequences over a single-qubit net")
    s.add_argument("--instance", required=True)
    s.add_argument("--grid", help="NX,NPHASE of a coarse net")
    s.add_argument("--net-eps", type=float)
    s.add_argument("--max-configs", type=int, default=SearchGuard().max_configs)
    s.add_argument("--out")
    s.set_defaults(func=cmd_pspace_search)

    s = sub.add_parser("korth", help="decide k-orthogonality of two states")
    s.add_argument("--v", required=True, help="bit string or amplitude JSON file")
    s.add_argument("--w", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tol", type=float, default=TOL.compare)
    s.add_argument("--out")
    s.set_defaults(func=cmd_korth)

    s = sub.add_parser("net-test", help="empirical coverage of the single-qubit net")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_net_test)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors exit with 1; --help and --version with 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SchemaError, ValueError, IndexError, GuardExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
