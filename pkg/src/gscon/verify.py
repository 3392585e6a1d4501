"""GSCON instances and the deciders that act on them.

``verify_witness`` checks a concrete unitary sequence against the YES and
NO conditions. ``qcma_verifier_sim`` replays the two-local proof system
with exact arithmetic in place of estimation subroutines.
``pspace_search`` explores one-local sequences over a single-qubit net,
tracking only the cumulative per-qubit operator, and ``brute_force_gscon``
is an unrounded exhaustive oracle for cross-checking it.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .nets import (
    PseudoNet,
    SingleQubitNet,
    canonical_index,
    net_element,
    net_round,
    net_snap,
    pseudo_check_C,
    pseudo_round_R,
    pseudo_snap_coords,
)
from .qcore import (
    TOL,
    LocalHamiltonian,
    LocalOperator,
    StateVector,
    _apply_matrix,
    energy,
    spectral_norm,
)

GAP_TOL = TOL.compare


class Verdict(str, Enum):
    YES = "YES"
    NO = "NO"
    INDETERMINATE = "INDETERMINATE"


class GuardExceeded(RuntimeError):
    """A search would exceed its configured size limits."""


@dataclass(frozen=True, eq=False)
class GsconInstance:
    H: LocalHamiltonian
    eta1: float
    eta2: float
    eta3: float
    eta4: float
    delta: float
    l: int
    m: int
    psi: StateVector
    phi: StateVector
    k: int | None = None

    def __post_init__(self):
        if self.k is None:
            object.__setattr__(self, "k", self.H.locality)
        if self.psi.n != self.H.n or self.phi.n != self.H.n:
            raise ValueError("psi, phi and H act on different qubit counts")
        if self.delta <= 0:
            raise ValueError("Delta must be positive")
        if self.eta2 - self.eta1 < self.delta or self.eta4 - self.eta3 < self.delta:
            raise ValueError("promise gaps eta2 - eta1 and eta4 - eta3 must be at least Delta")
        if self.m < 0 or self.l < 1:
            raise ValueError("need m >= 0 and l >= 1")
        for name, state in (("psi", self.psi), ("phi", self.phi)):
            if energy(self.H, state) > self.eta1 + TOL.norm:
                raise ValueError(f"{name} has energy above eta1")

    @property
    def n(self) -> int:
        return self.H.n

    @property
    def L(self) -> int:
        return self.H.num_terms


@dataclass(frozen=True, eq=False)
class WitnessSequence:
    ops: tuple

    def __post_init__(self):
        ops = tuple(self.ops)
        for op in ops:
            if not op.is_unitary():
                raise ValueError(f"witness operator on {op.qubits} is not unitary")
        object.__setattr__(self, "ops", ops)

    def __len__(self):
        return len(self.ops)

    @property
    def locality(self) -> int:
        return max((op.arity for op in self.ops), default=0)


@dataclass(frozen=True)
class VerifyReport:
    verdict: Verdict
    energies: tuple
    final_distance: float
    first_violation: int | None


def verify_witness(inst: GsconInstance, w: WitnessSequence | Sequence[LocalOperator], tol: float = GAP_TOL) -> VerifyReport:
    """Classify a sequence as YES-valid, NO-evidence or indeterminate.

    Padding a short sequence with identities leaves the remaining states
    equal to the last one, so only the given operators are simulated.
    """
    if not isinstance(w, WitnessSequence):
        w = WitnessSequence(tuple(w))
    if len(w) > inst.m:
        raise ValueError(f"witness has {len(w)} unitaries, instance allows {inst.m}")
    if w.locality > inst.l:
        raise ValueError(f"witness uses {w.locality}-local unitaries, instance allows {inst.l}")
    amps = inst.psi.amps
    energies = []
    for op in w.ops:
        op.check_within(inst.n)
        amps = _apply_matrix(amps, inst.n, op.qubits, op.matrix)
        energies.append(energy(inst.H, StateVector(inst.n, amps)))
    if len(w) < inst.m and inst.m > 0:
        last = energies[-1] if energies else energy(inst.H, inst.psi)
        energies += [last] * (inst.m - len(w))
    dist = float(np.linalg.norm(amps - inst.phi.amps))
    high = [i for i, e in enumerate(energies, 1) if e > inst.eta1 + tol]
    first = high[0] if high else (inst.m if dist > inst.eta3 + tol else None)
    if not high and dist <= inst.eta3 + tol:
        verdict = Verdict.YES
    elif any(e >= inst.eta2 for e in energies) or dist >= inst.eta4:
        verdict = Verdict.NO
    else:
        verdict = Verdict.INDETERMINATE
    return VerifyReport(verdict, tuple(energies), dist, first)


def pad_with_identity(ops: Sequence[LocalOperator], m: int, qubit: int = 0) -> list[LocalOperator]:
    ops = list(ops)
    if len(ops) > m:
        raise ValueError("sequence longer than m")
    return ops + [LocalOperator((qubit,), np.eye(2))] * (m - len(ops))


# --------------------------------------------------------------------------
# two-local proof system


@dataclass(frozen=True)
class QcmaResult:
    accepted: bool
    reason: str
    eps: float
    step: int | None = None
    energies: tuple = ()
    final_distance: float | None = None


def qcma_eps(inst: GsconInstance) -> float:
    return inst.delta / (16 * inst.m * max(inst.L, 1))


def qcma_net(inst: GsconInstance) -> PseudoNet:
    return PseudoNet(4, qcma_eps(inst))


def qcma_encode(inst: GsconInstance, ops: Sequence[LocalOperator]) -> list[tuple]:
    """Honest proof: each unitary, identity-padded to length m and lifted to a pair, snapped onto the pseudo-net."""
    net = qcma_net(inst)
    proof = []
    for op in pad_with_identity(ops, inst.m):
        op = lift_to_pair(op, inst.n)
        proof.append((op.qubits, pseudo_snap_coords(op.matrix, net)))
    return proof


def lift_to_pair(op: LocalOperator, n: int) -> LocalOperator:
    """Extend a single-qubit operator by an identity on a neighbour."""
    if op.arity == 2:
        return op
    if op.arity != 1 or n < 2:
        raise ValueError("only one- and two-qubit operators can be sent as pair proofs")
    q = op.qubits[0]
    partner = q + 1 if q + 1 < n else q - 1
    if partner > q:
        return LocalOperator((q, partner), np.kron(op.matrix, np.eye(2)))
    return LocalOperator((partner, q), np.kron(np.eye(2), op.matrix))


def qcma_verifier_sim(inst: GsconInstance, proof: Sequence[tuple]) -> QcmaResult:
    """Run the unitary check, rounding, energy and target checks on a claimed proof.

    Each proof entry is ``(qubit pair, lattice coordinates)`` on the
    d = 4 pseudo-net with ``eps = Delta / (16 m L)``.
    """
    if inst.l != 2:
        raise ValueError("the pair proof system needs an instance with l = 2")
    if len(proof) != inst.m:
        raise ValueError(f"proof has {len(proof)} entries, expected m = {inst.m}")
    net = qcma_net(inst)
    eps = net.eps
    rounded = []
    for t, (qubits, coords) in enumerate(proof, 1):
        qubits = tuple(int(q) for q in qubits)
        if len(qubits) != 2:
            raise ValueError("each proof entry must name two qubits")
        M = net.matrix(coords)
        if not pseudo_check_C(M, net):
            return QcmaResult(False, "unitary check", eps, t)
        rounded.append(LocalOperator(qubits, pseudo_round_R(M, net)))
    amps = inst.psi.amps
    energies = []
    for t, op in enumerate(rounded, 1):
        op.check_within(inst.n)
        amps = _apply_matrix(amps, inst.n, op.qubits, op.matrix)
        e = energy(inst.H, StateVector.from_amplitudes(amps))
        energies.append(e)
        if e > inst.eta1 + eps:
            return QcmaResult(False, "energy check", eps, t, tuple(energies))
    dist = float(np.linalg.norm(amps - inst.phi.amps))
    if dist > inst.eta3 + eps:
        return QcmaResult(False, "target check", eps, inst.m, tuple(energies), dist)
    return QcmaResult(True, "accepted", eps, None, tuple(energies), dist)


# --------------------------------------------------------------------------
# one-local net search


@dataclass(frozen=True)
class SearchGuard:
    max_qubits: int = 8
    max_m: int = 4096
    max_configs: int = 200_000


SEARCH_GUARD = SearchGuard()
BRUTE_GUARD = SearchGuard(max_qubits=3, max_m=4)


@dataclass(frozen=True)
class SearchResult:
    accepted: bool
    path: tuple
    alg_eps: float
    energy_threshold: float
    proximity_threshold: float
    explored: int


def pspace_eps(inst: GsconInstance) -> float:
    return inst.delta / (8 * max(inst.L, 1) * (2 * (inst.m - 1) + 1))


def _product_state(psi: StateVector, mats: Sequence[np.ndarray]) -> np.ndarray:
    amps = psi.amps
    for q, M in enumerate(mats):
        amps = _apply_matrix(amps, psi.n, (q,), M)
    return amps


def _check_guard(inst: GsconInstance, guard: SearchGuard) -> None:
    if inst.l != 1:
        raise ValueError("net search handles l = 1 instances only")
    if inst.n > guard.max_qubits or inst.m > guard.max_m:
        raise GuardExceeded(f"n={inst.n}, m={inst.m} exceeds the search guard")


def pspace_search(inst: GsconInstance, net: SingleQubitNet, guard: SearchGuard = SEARCH_GUARD) -> SearchResult:
    """Search over cumulative per-qubit net operators, rounding after every product.

    A configuration is the tuple of per-qubit net indices. Breadth-first
    order with a visited set replaces the nondeterministic guess: a
    configuration first reached at depth i is never worth revisiting
    later, since any continuation from there has fewer steps left.
    """
    _check_guard(inst, guard)
    if net.size > guard.max_configs:
        raise GuardExceeded(f"net of {net.size} indices is too large to enumerate")
    e_thr = inst.eta1 + inst.delta / 3
    p_thr = inst.eta3 + inst.delta / 4
    result = {"alg_eps": pspace_eps(inst), "energy_threshold": e_thr, "proximity_threshold": p_thr}
    if inst.psi.distance(inst.phi) <= inst.eta3:
        return SearchResult(True, (), explored=0, **result)

    elements = sorted({canonical_index(net, idx) for idx in net})
    mats = {idx: net_element(net, idx) for idx in elements}
    product: dict = {}

    def times(b, v):
        key = (b, v)
        if key not in product:
            product[key] = net_snap(net, mats[b] @ mats[v])
            mats.setdefault(product[key], net_element(net, product[key]))
        return product[key]

    ident = net_snap(net, np.eye(2))
    mats.setdefault(ident, net_element(net, ident))
    start = (ident,) * inst.n
    parent = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        config, depth = frontier.popleft()
        if depth == inst.m:
            continue
        for q in range(inst.n):
            for b in elements:
                new = config[:q] + (times(b, config[q]),) + config[q + 1:]
                if new in parent:
                    continue
                parent[new] = (config, q, b)
                if len(parent) > guard.max_configs:
                    raise GuardExceeded("configuration count exceeds the search guard")
                amps = _product_state(inst.psi, [mats[i] for i in new])
                if energy(inst.H, StateVector.from_amplitudes(amps)) >= e_thr:
                    continue
                if np.linalg.norm(amps - inst.phi.amps) <= p_thr:
                    return SearchResult(True, _trace_path(parent, new), explored=len(parent), **result)
                frontier.append((new, depth + 1))
    return SearchResult(False, (), explored=len(parent), **result)


def _trace_path(parent: Mapping, config) -> tuple:
    path = []
    while parent[config] is not None:
        config, q, b = parent[config]
        path.append((q, tuple(b)))
    return tuple(reversed(path))


@dataclass(frozen=True)
class DriftReport:
    drift: tuple
    bounds: tuple

    @property
    def holds(self) -> bool:
        return all(d <= b + 1e-12 for d, b in zip(self.drift, self.bounds))


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for M in mats:
        out = np.kron(out, M)
    return out


def rounding_drift(net: SingleQubitNet, ops: Sequence[LocalOperator], n: int) -> DriftReport:
    """Replay a one-local sequence the way the net search does and measure the drift.

    Returns ``||U_i - V_i||`` for the exact cumulative product ``U_i`` and
    the rounded one ``V_i``, with the bound ``(2(i-1)+1) eps`` alongside.
    """
    if n > 8:
        raise GuardExceeded("drift is measured on dense matrices; n <= 8")
    U = [np.eye(2, dtype=complex) for _ in range(n)]
    V = [np.eye(2, dtype=complex) for _ in range(n)]
    drift, bounds = [], []
    for i, op in enumerate(ops, 1):
        if op.arity != 1:
            raise ValueError("drift replay takes single-qubit operators")
        q = op.qubits[0]
        U[q] = op.matrix @ U[q]
        V[q] = net_round(net, net_round(net, op.matrix) @ V[q])
        drift.append(spectral_norm(_kron_all(U) - _kron_all(V)))
        bounds.append((2 * (i - 1) + 1) * net.eps)
    return DriftReport(tuple(drift), tuple(bounds))


def brute_force_gscon(
    inst: GsconInstance,
    net: SingleQubitNet,
    net_eps: float,
    guard: SearchGuard = BRUTE_GUARD,
    gate_sets: Mapping[int, Sequence[np.ndarray]] | None = None,
) -> bool:
    """Exhaustive search over unrounded sequences of net unitaries.

    A sequence passes when every prefix state has energy at most
    ``eta1 + 4 net_eps m L`` and some prefix ends within
    ``eta3 + 2 net_eps m`` of phi (later steps may be identities). States
    are deduplicated per depth, which is exact because passing depends
    only on the state reached and the steps left.
    """
    if gate_sets is None and inst.l != 1:
        raise ValueError("default gate set covers l = 1 only; pass gate_sets for wider unitaries")
    if inst.n > guard.max_qubits or inst.m > guard.max_m:
        raise GuardExceeded(f"n={inst.n}, m={inst.m} exceeds the brute-force guard")
    if gate_sets is None:
        seen_elems = {}
        for idx in net:
            U = net_element(net, idx)
            seen_elems.setdefault(_key(U), U)
        gate_sets = {1: list(seen_elems.values())}
    e_thr = inst.eta1 + 4 * net_eps * inst.m * max(inst.L, 1)
    d_thr = inst.eta3 + 2 * net_eps * inst.m
    if inst.psi.distance(inst.phi) <= d_thr:
        return True
    moves = []
    for arity, gates in gate_sets.items():
        if arity > inst.l:
            continue
        for qubits in combinations(range(inst.n), arity):
            moves += [(qubits, G) for G in gates]
    layer = {_key(inst.psi.amps): inst.psi.amps}
    seen = set(layer)
    explored = 0
    for _ in range(inst.m):
        nxt = {}
        for amps in layer.values():
            for qubits, G in moves:
                new = _apply_matrix(amps, inst.n, qubits, G)
                key = _key(new)
                if key in seen:
                    continue
                seen.add(key)
                explored += 1
                if explored > guard.max_configs * 10:
                    raise GuardExceeded("brute-force state count exceeds the guard")
                if energy(inst.H, StateVector.from_amplitudes(new)) > e_thr:
                    continue
                if np.linalg.norm(new - inst.phi.amps) <= d_thr:
                    return True
                nxt[key] = new
        layer = nxt
    return False


def _key(a: np.ndarray, digits: int = 9) -> tuple:
    a = np.round(np.asarray(a), digits)
    return tuple(np.concatenate([a.real.ravel(), a.imag.ravel()]))
