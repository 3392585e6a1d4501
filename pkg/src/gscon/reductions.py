"""Constructions that produce GSCON instances together with honest witnesses.

* 3-CNF reconfiguration: one diagonal projector per clause, penalizing
  the clause's falsifying assignment.
* Circuits: a unary-clock Hamiltonian whose zero-energy states are
  history states, wrapped with a three-qubit GO register so that the
  check only switches on mid-sequence.
* Succinct formulas: a clause oracle turned into a term oracle with a
  two-qubit GO register.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm

from .korth import Subspace
from .qcore import (
    CNOT,
    I2,
    MAX_EIG_QUBITS,
    LocalHamiltonian,
    LocalOperator,
    StateVector,
    X,
    _apply_matrix,
    controlled,
    embed_sparse,
    energy,
    min_eigenvalue,
    spectrum,
)
from .verify import GsconInstance, WitnessSequence

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)


# --------------------------------------------------------------------------
# 3-CNF formulas


@dataclass(frozen=True)
class Cnf3:
    """Formula over variables 1..num_vars; literal -v is the negation of v."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        if self.num_vars < 1:
            raise ValueError("formula needs at least one variable")
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            if any(x == 0 or abs(x) > self.num_vars for x in c):
                raise ValueError(f"clause {c} references an unknown variable")
        object.__setattr__(self, "clauses", clauses)

    def satisfies(self, bits: str) -> bool:
        return all(_clause_true(c, bits) for c in self.clauses)

    def satisfying(self) -> list[str]:
        n = self.num_vars
        return [s for s in (format(i, f"0{n}b") for i in range(2**n)) if self.satisfies(s)]

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def _clause_true(clause, bits: str) -> bool:
    return any((bits[abs(x) - 1] == "1") == (x > 0) for x in clause)


def parse_dimacs(text: str) -> Cnf3:
    """Read a DIMACS CNF file with exactly three literals per clause."""
    num_vars = num_clauses = None
    literals: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed problem line: {raw!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError("clause before the problem line")
        if not re.fullmatch(r"-?\d+(\s+-?\d+)*", line):
            raise ValueError(f"malformed clause line: {raw!r}")
        literals += [int(tok) for tok in line.split()]
    if num_vars is None:
        raise ValueError("missing problem line")
    if literals and literals[-1] != 0:
        raise ValueError("last clause is not terminated by 0")
    clauses, cur = [], []
    for lit in literals:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if len(clauses) != num_clauses:
        raise ValueError(f"problem line announces {num_clauses} clauses, found {len(clauses)}")
    return Cnf3(num_vars, tuple(clauses))


def _check_bits(phi: Cnf3, bits: str, name: str) -> None:
    if len(bits) != phi.num_vars or set(bits) - {"0", "1"}:
        raise ValueError(f"{name} must be a {phi.num_vars}-bit string")
    if not phi.satisfies(bits):
        raise ValueError(f"{name} does not satisfy the formula")


def _flip(bits: str, i: int) -> str:
    return bits[:i] + ("1" if bits[i] == "0" else "0") + bits[i + 1:]


def reachable(phi: Cnf3, x: str) -> dict:
    """Breadth-first parents over satisfying assignments one bit-flip apart."""
    parent = {x: None}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        for i in range(phi.num_vars):
            nxt = _flip(cur, i)
            if nxt not in parent and phi.satisfies(nxt):
                parent[nxt] = cur
                queue.append(nxt)
    return parent


def stconn_bfs(phi: Cnf3, x: str, y: str) -> tuple[bool, list | None]:
    _check_bits(phi, x, "x")
    _check_bits(phi, y, "y")
    parent = reachable(phi, x)
    if y not in parent:
        return False, None
    path = [y]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return True, path[::-1]


def clause_term(clause) -> tuple[tuple, np.ndarray]:
    """Projector onto the assignment falsifying ``clause`` on its distinct variables.

    A clause holding both a literal and its negation is never false and
    gets the zero matrix.
    """
    qubits = tuple(sorted({abs(x) - 1 for x in clause}))
    wanted = {}
    for lit in clause:
        bit = 0 if lit > 0 else 1  # value that makes the literal false
        if wanted.setdefault(abs(lit) - 1, bit) != bit:
            return qubits, np.zeros((2 ** len(qubits),) * 2, dtype=complex)
    z = int("".join(str(wanted[q]) for q in qubits), 2)
    M = np.zeros((2 ** len(qubits),) * 2, dtype=complex)
    M[z, z] = 1
    return qubits, M


def cnf_hamiltonian(phi: Cnf3) -> LocalHamiltonian:
    terms = []
    for c in phi.clauses:
        qubits, M = clause_term(c)
        if np.any(M):
            terms.append(LocalOperator(qubits, M))
    return LocalHamiltonian(phi.num_vars, tuple(terms))


@dataclass(frozen=True)
class StconnReduction:
    instance: GsconInstance
    phi: Cnf3
    x: str
    y: str

    def witness(self, path: Sequence[str]) -> WitnessSequence:
        return path_witness(path, self.instance.m)


def path_witness(path: Sequence[str], m: int) -> WitnessSequence:
    """Pauli-X on the flipped bit of each step, identity-padded to length m."""
    ops = []
    for a, b in itertools.pairwise(path):
        diff = [i for i in range(len(a)) if a[i] != b[i]]
        if len(diff) != 1:
            raise ValueError(f"{a} -> {b} is not a single bit flip")
        ops.append(LocalOperator((diff[0],), X))
    if len(ops) > m:
        raise ValueError("path longer than m")
    ops += [LocalOperator((0,), I2)] * (m - len(ops))
    return WitnessSequence(tuple(ops))


def stconn_to_gscon(phi: Cnf3, x: str, y: str) -> StconnReduction:
    _check_bits(phi, x, "x")
    _check_bits(phi, y, "y")
    n = phi.num_vars
    gap = 2.0 ** -(2 * n + 4)
    inst = GsconInstance(
        H=cnf_hamiltonian(phi),
        eta1=0.0,
        eta2=gap,
        eta3=0.0,
        eta4=0.25,
        delta=gap,
        l=1,
        m=2**n,
        psi=StateVector.basis(x),
        phi=StateVector.basis(y),
    )
    return StconnReduction(inst, phi, x, y)


def stconn_partition(phi: Cnf3, x: str) -> tuple[Subspace, Subspace]:
    """Span of satisfying assignments reachable from x, and of all other satisfying ones."""
    near = set(reachable(phi, x))
    far = [s for s in phi.satisfying() if s not in near]
    n = phi.num_vars
    return Subspace.from_bitstrings(n, sorted(near)), Subspace.from_bitstrings(n, far)


def _diagonal(H: LocalHamiltonian) -> np.ndarray:
    if H.n > MAX_EIG_QUBITS:
        raise ValueError("diagonal scan limited to 14 qubits")
    diag = np.zeros(2**H.n)
    for t in H.terms:
        if np.any(np.abs(t.matrix - np.diag(np.diag(t.matrix))) > 1e-12):
            raise ValueError("Hamiltonian is not diagonal in the computational basis")
        diag += embed_sparse(t, H.n).diagonal().real
    return diag


def h_dominates_p_check(H: LocalHamiltonian, S: Subspace, T: Subspace, tol: float = 1e-12) -> bool:
    """Check that the diagonal H dominates P' = I - Pi_S - Pi_T on every basis state.

    Both the zero pattern (H vanishes exactly where P' does) and the
    entrywise inequality are checked.
    """
    h = _diagonal(H)
    Pi = S.projector() + T.projector()
    if np.any(np.abs(Pi - np.diag(np.diag(Pi))) > tol):
        raise ValueError("S and T must be spanned by computational basis states")
    p = 1.0 - np.diag(Pi).real
    zero_h = np.abs(h) <= tol
    zero_p = np.abs(p) <= tol
    return bool(np.all(zero_h == zero_p) and np.all(h >= p - tol))


# --------------------------------------------------------------------------
# circuits and the unary clock


@dataclass(frozen=True, eq=False)
class CircuitDescriptor:
    """Gates on a work register of ``n_proof`` proof qubits followed by ``n_ancilla`` ancillas.

    The circuit accepts when ``output`` measures 1.
    """

    gates: tuple
    n_proof: int
    n_ancilla: int
    output: int = 0

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            g.check_within(self.n_work)
            if g.arity > 2 or not g.is_unitary():
                raise ValueError("circuit gates must be unitaries on at most two qubits")
        if not 0 <= self.output < self.n_work:
            raise ValueError("output qubit outside the work register")
        object.__setattr__(self, "gates", gates)

    @property
    def n_work(self) -> int:
        return self.n_proof + self.n_ancilla

    @property
    def L(self) -> int:
        return len(self.gates)

    def run(self, proof: StateVector) -> np.ndarray:
        amps = self.initial(proof)
        for g in self.gates:
            amps = _apply_matrix(amps, self.n_work, g.qubits, g.matrix)
        return amps

    def initial(self, proof: StateVector) -> np.ndarray:
        if proof.n != self.n_proof:
            raise ValueError(f"proof on {proof.n} qubits, circuit expects {self.n_proof}")
        anc = np.zeros(2**self.n_ancilla, dtype=complex)
        anc[0] = 1
        return np.kron(proof.amps, anc)

    def accept_probability(self, proof: StateVector) -> float:
        amps = self.run(proof).reshape((2,) * self.n_work)
        return float(np.sum(np.abs(np.take(amps, 1, axis=self.output)) ** 2))


def with_proof_copy(circ: CircuitDescriptor) -> CircuitDescriptor:
    """Prepend CNOTs copying every proof qubit onto a fresh ancilla."""
    base = circ.n_work
    copies = tuple(LocalOperator((i, base + i), CNOT) for i in range(circ.n_proof))
    return CircuitDescriptor(copies + circ.gates, circ.n_proof, circ.n_ancilla + circ.n_proof, circ.output)


@dataclass(frozen=True, eq=False)
class KitaevHamiltonian:
    hamiltonian: LocalHamiltonian
    circuit: CircuitDescriptor
    n_clock: int
    alpha_bound: float
    beta_estimate: float

    @property
    def clock_qubits(self) -> tuple:
        w = self.circuit.n_work
        return tuple(range(w, w + self.n_clock))


def _clock_code(t: int, L: int, window: Sequence[int]) -> int:
    """Index of unary time ``t`` restricted to the clock qubits in ``window`` (1-based)."""
    bits = "".join("1" if c <= t else "0" for c in window)
    return int(bits, 2)


def _propagation_term(gate: LocalOperator, t: int, L: int, clock: Sequence[int]) -> LocalOperator:
    if L == 1:
        window = [1]
    elif t == 1:
        window = [1, 2]
    elif t == L:
        window = [L - 1, L]
    else:
        window = [t - 1, t, t + 1]
    dc = 2 ** len(window)
    now, before = _clock_code(t, L, window), _clock_code(t - 1, L, window)
    V = gate.matrix
    dv = V.shape[0]
    E = lambda a, b: np.outer(np.eye(dc)[a], np.eye(dc)[b])
    M = 0.5 * (
        np.kron(np.eye(dv), E(now, now) + E(before, before))
        - np.kron(V, E(now, before))
        - np.kron(V.conj().T, E(before, now))
    )
    return LocalOperator(gate.qubits + tuple(clock[c - 1] for c in window), M)


def kitaev_hamiltonian(
    circ: CircuitDescriptor,
    completeness_error: float = 0.0,
    proofs: Sequence[StateVector] = (),
) -> KitaevHamiltonian:
    """Unary-clock Hamiltonian over work register and L clock qubits.

    Terms: ancillas start in 0, the output is 1 at the final time, the
    clock is a legal unary string, and each gate links neighbouring times.
    ``proofs`` accepted with probability at least ``1 - completeness_error``
    are checked to have history-state energy at most the resulting alpha.
    """
    L = circ.L
    if L < 1:
        raise ValueError("circuit needs at least one gate")
    n = circ.n_work + L
    if n > MAX_EIG_QUBITS:
        raise ValueError(f"{n} qubits exceeds the desk guard of {MAX_EIG_QUBITS}")
    clock = list(range(circ.n_work, n))
    terms = []
    for a in range(circ.n_proof, circ.n_work):
        terms.append(LocalOperator((a, clock[0]), np.kron(P1, P0)))
    terms.append(LocalOperator((circ.output, clock[-1]), np.kron(P0, P1)))
    for t in range(L - 1):
        terms.append(LocalOperator((clock[t], clock[t + 1]), np.kron(P0, P1)))
    for t, g in enumerate(circ.gates, 1):
        terms.append(_propagation_term(g, t, L, clock))
    H = LocalHamiltonian(n, tuple(terms))
    alpha = completeness_error / (L + 1)
    for proof in proofs:
        e = energy(H, history_state(circ, proof))
        if circ.accept_probability(proof) >= 1 - completeness_error - 1e-12 and e > alpha + 1e-10:
            raise ValueError(f"history state energy {e} exceeds alpha {alpha}")
    if n <= 10:
        vals = spectrum(H)
        positive = vals[vals > 1e-9]
        beta = float(positive[0]) if positive.size else 0.0
    else:
        beta = min_eigenvalue(H)
    return KitaevHamiltonian(H, circ, L, alpha, beta)


def history_state(circ: CircuitDescriptor, proof: StateVector) -> StateVector:
    """Uniform superposition over t of (first t gates applied) tensor unary clock |t>."""
    L = circ.L
    amps = circ.initial(proof)
    total = np.zeros(2 ** (circ.n_work + L), dtype=complex)
    for t in range(L + 1):
        if t:
            g = circ.gates[t - 1]
            amps = _apply_matrix(amps, circ.n_work, g.qubits, g.matrix)
        tick = np.zeros(2**L, dtype=complex)
        tick[int("1" * t + "0" * (L - t), 2) if L else 0] = 1
        total += np.kron(amps, tick)
    return StateVector(circ.n_work + L, total / math.sqrt(L + 1))


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _controlled_on(control: int, gate: LocalOperator) -> list[LocalOperator]:
    """Gates of at most two qubits implementing ``gate`` controlled on ``control``."""
    V = gate.matrix
    if gate.arity == 1:
        return [LocalOperator((control, gate.qubits[0]), controlled(V))]
    a, b = gate.qubits
    if np.allclose(V[:2, :2], np.eye(2), atol=1e-12) and np.allclose(V[:2, 2:], 0, atol=1e-12) and np.allclose(V[2:, :2], 0, atol=1e-12):
        # gate is controlled-U from a onto b: doubly controlled U via a square root
        U = V[2:, 2:]
        R = sqrtm(U)
        return [
            LocalOperator((a, b), controlled(R)),
            LocalOperator((control, a), CNOT),
            LocalOperator((a, b), controlled(R.conj().T)),
            LocalOperator((control, a), CNOT),
            LocalOperator((control, b), controlled(R)),
        ]
    A, B = _split_product(V)
    if A is not None:
        return [LocalOperator((control, a), controlled(A)), LocalOperator((control, b), controlled(B))]
    raise ValueError("two-qubit gates must be controlled-U or a tensor product to be controlled with two-qubit gates")


def _split_product(V: np.ndarray):
    """Factor a 4x4 unitary as A (x) B when it has operator Schmidt rank one."""
    R = V.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(R)
    if s[1] > 1e-10:
        return None, None
    A = (u[:, 0] * math.sqrt(s[0])).reshape(2, 2)
    B = (vh[0] * math.sqrt(s[0])).reshape(2, 2)
    return A, B


def history_circuit(circ: CircuitDescriptor) -> list[LocalOperator]:
    """Two-local gates mapping |x>|0...>|clock 0> to the history state of proof |x>.

    A chain of rotations spreads the clock uniformly over unary strings,
    then gate t runs controlled on clock qubit t.
    """
    L = circ.L
    clock = list(range(circ.n_work, circ.n_work + L))
    ops = [LocalOperator((clock[0],), _ry(2 * math.asin(math.sqrt(L / (L + 1)))))]
    for t in range(1, L):
        p = (L - t) / (L - t + 1)
        ops.append(LocalOperator((clock[t - 1], clock[t]), controlled(_ry(2 * math.asin(math.sqrt(p))))))
    for t, g in enumerate(circ.gates):
        ops += _controlled_on(clock[t], g)
    return ops


# --------------------------------------------------------------------------
# GO register


def p_pieces() -> list[tuple[tuple, np.ndarray]]:
    """Two-local pieces of I - |000><000| - |111><111| on three qubits, each with weight 1/2."""
    ket = lambda s: np.diag([1.0 if format(i, f"0{len(s)}b") == s else 0.0 for i in range(2 ** len(s))])
    return [
        ((0, 1), ket("01")),
        ((0, 1), ket("10")),
        ((1, 2), ket("01")),
        ((1, 2), ket("10")),
        ((0, 2), ket("10")),
        ((0, 2), ket("01")),
    ]


def p_matrix() -> np.ndarray:
    P = np.zeros((8, 8), dtype=complex)
    for qubits, M in p_pieces():
        P += 0.5 * embed_sparse(LocalOperator(qubits, M), 3).toarray()
    return P


@dataclass(frozen=True, eq=False)
class GoInstance:
    instance: GsconInstance
    n_h: int

    @property
    def go_qubits(self) -> tuple:
        return (self.n_h, self.n_h + 1, self.n_h + 2)


def go_compose(Hprime: LocalHamiltonian, alpha: float, beta: float, m: int) -> GoInstance:
    """H = sum_j H'_j (x) P on a fresh three-qubit GO register.

    P is spread over its six two-local pieces, so every term of H' gives
    six product terms. Thresholds: eta1 = alpha, eta2 = beta / (16 m^2),
    eta3 = 0, eta4 = 1/4 and Delta = eta2 - eta1.
    """
    n_h = Hprime.n
    n = n_h + 3
    if n > MAX_EIG_QUBITS + 3:
        raise ValueError("GO instance too large")
    terms = []
    for h in Hprime.terms:
        for (ga, gb), piece in p_pieces():
            terms.append(LocalOperator(h.qubits + (n_h + ga, n_h + gb), np.kron(h.matrix, 0.5 * piece)))
    eta1 = alpha
    eta2 = beta / (16 * m * m)
    if eta2 <= eta1:
        raise ValueError("beta / (16 m^2) must exceed alpha for a nonempty promise gap")
    zeros = "0" * n_h
    inst = GsconInstance(
        H=LocalHamiltonian(n, tuple(terms)),
        eta1=eta1,
        eta2=eta2,
        eta3=0.0,
        eta4=0.25,
        delta=eta2 - eta1,
        l=2,
        m=m,
        psi=StateVector.basis(zeros + "000"),
        phi=StateVector.basis(zeros + "111"),
    )
    return GoInstance(inst, n_h)


def _x_layer(x: str) -> list[LocalOperator]:
    return [LocalOperator((i,), X if b == "1" else I2) for i, b in enumerate(x)]


def go_witness_sequence(x: str, W: Sequence[LocalOperator], n_h: int) -> list[LocalOperator]:
    """Prepare x, build the history state, flip the GO register in two moves, undo."""
    go = (n_h, n_h + 1, n_h + 2)
    return (
        _x_layer(x)
        + list(W)
        + [LocalOperator(go[:2], np.kron(X, X)), LocalOperator((go[2],), X)]
        + [g.dagger() for g in reversed(W)]
        + _x_layer(x)
    )


@dataclass(frozen=True, eq=False)
class GoReduction:
    go: GoInstance
    kitaev: KitaevHamiltonian
    W: tuple

    @property
    def instance(self) -> GsconInstance:
        return self.go.instance

    def witness(self, x: str) -> list[LocalOperator]:
        return go_witness_sequence(x, self.W, self.go.n_h)


def circuit_to_gscon(circ: CircuitDescriptor, accepting: Sequence[str]) -> GoReduction:
    """Full pipeline: proof copy, clock Hamiltonian, GO wrapping.

    ``accepting`` lists proofs (bit strings) whose history states set the
    measured alpha; beta is the lowest nonzero eigenvalue of H'.
    """
    circ = with_proof_copy(circ)
    proofs = [StateVector.basis(x) for x in accepting]
    kh = kitaev_hamiltonian(circ, proofs=proofs)
    alpha = max([max(0.0, energy(kh.hamiltonian, history_state(circ, p))) for p in proofs], default=0.0)
    W = tuple(history_circuit(circ))
    m = 2 * (circ.n_proof + len(W) + 1)
    go = go_compose(kh.hamiltonian, alpha, kh.beta_estimate, m)
    return GoReduction(go, kh, W)


# --------------------------------------------------------------------------
# succinct instances

ClauseOracle = Callable[[int], tuple]

P_GO2 = np.diag([0.0, 1.0, 1.0, 0.0]).astype(complex)


@dataclass(frozen=True)
class SuccinctOracles:
    ham_oracle: Callable[[int], tuple]
    psi_oracle: Callable[[int], np.ndarray]
    phi_oracle: Callable[[int], np.ndarray]
    n_exp: int
    r_exp: int

    @property
    def num_qubits(self) -> int:
        return 2**self.n_exp + 2


@dataclass(frozen=True)
class SuccinctInstance:
    oracles: SuccinctOracles
    eta1: float
    eta2: float
    eta3: float
    eta4: float
    delta: float
    l: int
    m: int

    def witness(self, assignment: str) -> list[LocalOperator]:
        N = 2**self.oracles.n_exp
        if len(assignment) != N:
            raise ValueError(f"assignment must have {N} bits")
        return _x_layer(assignment) + [LocalOperator((N,), X), LocalOperator((N + 1,), X)] + _x_layer(assignment)


def oracle3sat_to_succinct(clause_oracle: ClauseOracle, n_exp: int, r_exp: int) -> SuccinctInstance:
    """Wrap a clause oracle over 2^n_exp variables and 2^r_exp clauses."""
    N = 2**n_exp

    def ham_oracle(i: int):
        if not 0 <= i < 2**r_exp:
            raise IndexError("clause index out of range")
        clause = tuple(clause_oracle(i))
        if len(clause) != 3 or any(x == 0 or abs(x) > N for x in clause):
            raise ValueError(f"oracle returned malformed clause {clause}")
        qubits, M = clause_term(clause)
        term = np.kron(M, P_GO2)
        if np.max(np.abs(term - term.conj().T)) > 1e-12 or np.linalg.norm(term, 2) > 1 + 1e-10:
            raise ValueError("oracle term is not a Hermitian contraction")
        return term, qubits + (N, N + 1)

    def psi_oracle(i: int):
        _check_qubit(i, N + 2)
        return np.array([1, 0], dtype=complex)

    def phi_oracle(i: int):
        _check_qubit(i, N + 2)
        return np.array([1, 0], dtype=complex) if i < N else np.array([0, 1], dtype=complex)

    m = 2 ** (n_exp + 1) + 2
    eta2 = 1 / (16 * m * m)
    oracles = SuccinctOracles(ham_oracle, psi_oracle, phi_oracle, n_exp, r_exp)
    return SuccinctInstance(oracles, 0.0, eta2, 0.0, 0.25, eta2, 1, m)


def _check_qubit(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError("qubit index out of range")


def expand_succinct(si: SuccinctInstance) -> GsconInstance:
    """Query every oracle index and assemble the explicit instance."""
    o = si.oracles
    n = o.num_qubits
    terms = []
    for i in range(2**o.r_exp):
        M, qubits = o.ham_oracle(i)
        terms.append(LocalOperator(qubits, M))
    psi = StateVector.product(o.psi_oracle(i) for i in range(n))
    phi = StateVector.product(o.phi_oracle(i) for i in range(n))
    return GsconInstance(LocalHamiltonian(n, tuple(terms)), si.eta1, si.eta2, si.eta3, si.eta4, si.delta, si.l, si.m, psi, phi)


def succinct_direct(phi: Cnf3) -> GsconInstance:
    """The same instance built straight from an explicit formula with 2^n variables."""
    N = phi.num_vars
    n_exp = round(math.log2(N))
    if 2**n_exp != N:
        raise ValueError("variable count must be a power of two")
    P = np.eye(4) - np.outer([1, 0, 0, 0], [1, 0, 0, 0]) - np.outer([0, 0, 0, 1], [0, 0, 0, 1])
    terms = []
    for c in phi.clauses:
        qubits, M = clause_term(c)
        terms.append(LocalOperator(qubits + (N, N + 1), np.kron(M, P)))
    m = 2 ** (n_exp + 1) + 2
    eta2 = 1 / (16 * m * m)
    return GsconInstance(
        LocalHamiltonian(N + 2, tuple(terms)),
        0.0,
        eta2,
        0.0,
        0.25,
        eta2,
        1,
        m,
        StateVector.basis("0" * (N + 2)),
        StateVector.basis("0" * N + "11"),
    )


def cnf_clause_oracle(phi: Cnf3) -> ClauseOracle:
    return lambda i: phi.clauses[i]
