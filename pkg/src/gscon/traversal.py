"""Traversal bound checks and the staircase path from |000> to |111>.

Along any sequence of k-local unitaries taking ``v`` (in S) to within
``eps < 1/2`` of ``w`` (in T), with S and T k-orthogonal, some
intermediate state has weight at least ``((1 - 2 eps) / (2 m))**2`` on
``P = I - Pi_S - Pi_T``. The staircase shows the weight can be kept below
any ``Delta`` with 2-local steps, at the cost of a longer sequence.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .korth import Subspace, k_orth_subspaces
from .qcore import TOL, LocalOperator, StateVector, X, apply_local

LEMMA_SLACK = 1e-12


@dataclass(frozen=True)
class TraversalReport:
    m: int
    eps: float
    overlaps: tuple
    max_overlap: float
    bound: float
    k: int
    k_orthogonal: bool
    lemma_applicable: bool
    bound_satisfied: bool


def _as_projector(P, dim: int) -> np.ndarray:
    M = P.matrix if isinstance(P, LocalOperator) else np.asarray(P, dtype=complex)
    if M.shape != (dim, dim):
        raise ValueError(f"projector must be {dim}x{dim}")
    if np.max(np.abs(M - M.conj().T)) > TOL.unitary or np.max(np.abs(M @ M - M)) > TOL.unitary:
        raise ValueError("not an orthogonal projector")
    return M


def traversal_report(
    v: StateVector,
    w: StateVector,
    seq: Sequence[LocalOperator],
    PiS,
    PiT,
    k_orthogonal: bool | None = None,
) -> TraversalReport:
    """Evolve ``v`` through ``seq`` and compare the worst P-weight with the bound.

    ``k_orthogonal`` may be passed when the caller already knows whether S
    and T are k-orthogonal for the sequence locality; otherwise it is
    checked from the projectors.
    """
    if v.n != w.n:
        raise ValueError("v and w live on different qubit counts")
    dim = 2**v.n
    S = _as_projector(PiS, dim)
    T = _as_projector(PiT, dim)
    if np.max(np.abs(S @ T)) > TOL.unitary:
        raise ValueError("Pi_S and Pi_T are not orthogonal")
    P = np.eye(dim) - S - T
    k = max((op.arity for op in seq), default=0)
    overlaps = []
    state = v
    for op in seq:
        state = apply_local(state, op)
        overlaps.append(float(np.vdot(state.amps, P @ state.amps).real))
    m = len(seq)
    eps = state.distance(w)
    if k_orthogonal is None:
        k_orthogonal = bool(k >= 1 and k_orth_subspaces(Subspace.from_projector(S), Subspace.from_projector(T), k))
    max_overlap = max(overlaps, default=0.0)
    bound = ((1 - 2 * eps) / (2 * m)) ** 2 if m else math.inf
    applicable = m >= 1 and eps < 0.5 and k_orthogonal
    return TraversalReport(
        m=m,
        eps=eps,
        overlaps=tuple(overlaps),
        max_overlap=max_overlap,
        bound=bound,
        k=k,
        k_orthogonal=k_orthogonal,
        lemma_applicable=applicable,
        bound_satisfied=max_overlap >= bound - LEMMA_SLACK,
    )


def complete_unitary(columns: Sequence[tuple], dim: int | None = None) -> np.ndarray:
    """Unitary sending each (normalized) source vector to its target basis vector.

    Unspecified targets receive a Gram-Schmidt completion of the sources
    against the canonical basis, taken in index order.
    """
    if not columns:
        raise ValueError("no columns given")
    dim = dim or len(np.asarray(columns[0][0]))
    sources, targets = [], []
    for vec, t in columns:
        vec = np.asarray(vec, dtype=complex).ravel()
        if vec.size != dim:
            raise ValueError("source vector has the wrong dimension")
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("zero source vector")
        sources.append(vec / norm)
        targets.append(int(t))
    if len(set(targets)) != len(targets) or not all(0 <= t < dim for t in targets):
        raise ValueError("targets must be distinct basis indices")
    G = np.array([[np.vdot(a, b) for b in sources] for a in sources])
    if np.max(np.abs(G - np.eye(len(sources)))) > 1e-8:
        raise ValueError("source vectors are not orthogonal")
    basis = list(sources)
    # a residual this large always exists among the unexamined basis vectors,
    # and skipping smaller ones avoids normalizing cancellation noise
    keep = 0.5 / math.sqrt(dim)
    for e in np.eye(dim, dtype=complex):
        if len(basis) == dim:
            break
        r = e - sum(np.vdot(b, e) * b for b in basis)
        if np.linalg.norm(r) > keep:
            r = r - sum(np.vdot(b, r) * b for b in basis)
            basis.append(r / np.linalg.norm(r))
    free = [t for t in range(dim) if t not in targets]
    frame = np.zeros((dim, dim), dtype=complex)
    for vec, t in zip(basis, targets + free):
        frame[:, t] = vec
    return frame.conj().T


@dataclass(frozen=True)
class StaircaseParams:
    Delta: float

    def __post_init__(self):
        if not 0 < self.Delta < 0.5:
            raise ValueError("Delta must lie in (0, 1/2)")

    @property
    def beta(self) -> float:
        return math.sqrt(self.Delta)

    @property
    def alpha(self) -> float:
        return math.sqrt(1 - self.Delta)

    @property
    def zeta(self) -> float:
        return 2 * self.Delta / (1 + 2 * self.Delta)

    @property
    def cutoff(self) -> float:
        return 0.5 + self.zeta


def f_step(gamma1: float, Delta: float) -> float:
    """Amplitude left on |000> after one transfer pair."""
    return math.sqrt((1 - 2 * Delta) * gamma1**2 + Delta)


def step1_pair(gamma1: float, params: StaircaseParams):
    """Two 2-local unitaries moving a little amplitude from |000> to |111>.

    Returns ``(U1, U2, f(gamma1))``; U1 acts on qubits (0, 1), U2 on (1, 2).
    """
    if not (gamma1**2 > 0.5 and gamma1 <= 1 + 1e-12):
        raise ValueError("gamma1 must satisfy 1/2 < gamma1**2 <= 1")
    gamma1 = min(gamma1, 1.0)
    gamma2 = math.sqrt(max(0.0, 1 - gamma1**2))
    a, b = params.alpha, params.beta
    U1 = np.eye(4, dtype=complex)
    U1[:, 0] = [a, 0, 0, b]
    U1[:, 3] = [b, 0, 0, -a]
    U2 = complete_unitary(
        [
            (np.array([gamma1 * a, gamma2 * b, 0, 0]), 0),
            (np.array([0, 0, gamma1 * b, -gamma2 * a]), 3),
        ]
    )
    return LocalOperator((0, 1), U1), LocalOperator((1, 2), U2), f_step(gamma1, params.Delta)


def step2_beta(gamma1: float) -> float:
    """Parameter for the finishing block, solving the final-amplitude equation for beta."""
    g2 = gamma1**2
    return math.sqrt(max(0.0, (2 * g2 - 1) / (3 - 2 * g2)))


def step2_finisher(gamma1: float, params: StaircaseParams) -> list[LocalOperator]:
    """Three unitaries taking ``g1|000> + g2|111>`` exactly to the equal superposition.

    Built as the reverse of a map from the equal superposition, then
    inverted and reversed.
    """
    g2 = gamma1**2
    if not (0.5 - 1e-12 <= g2 <= params.cutoff + 1e-12):
        raise ValueError("gamma1**2 outside the finishing window (1/2, 1/2 + zeta]")
    beta = step2_beta(gamma1)
    alpha = math.sqrt(1 - beta**2)
    delta = math.sqrt((1 + beta**2) / 2)
    s = math.sqrt(2) * delta
    e = np.eye(4, dtype=complex)
    # A1: |00> -> |00>, |11> -> beta|01> + alpha|11>
    A1_dag = complete_unitary([(e[0], 0), (np.array([0, beta, 0, alpha]), 3)])
    # A2 is Hermitian
    A2 = complete_unitary(
        [
            (np.array([1 / s, 0, 0, beta / s]), 0),
            (e[1], 1),
            (e[2], 2),
            (np.array([beta / s, 0, 0, -1 / s]), 3),
        ]
    )
    # A3: |11> -> -|11>, normalized delta|00> + (alpha beta / 2 delta)|10> -> |00>
    A3 = complete_unitary([(np.array([delta, 0, alpha * beta / (2 * delta), 0]), 0), (-e[3], 3)])
    return [
        LocalOperator((0, 1), A3.conj().T),
        LocalOperator((1, 2), A2.conj().T),
        LocalOperator((0, 1), A1_dag),
    ]


def staircase_half(params: StaircaseParams) -> list[LocalOperator]:
    """2-local sequence taking |000> to (|000> + |111>)/sqrt(2)."""
    ops: list[LocalOperator] = []
    gamma1 = 1.0
    while gamma1**2 > params.cutoff:
        U1, U2, gamma1 = step1_pair(gamma1, params)
        ops += [U1, U2]
    ops += step2_finisher(gamma1, params)
    return ops


def half_iterations(params: StaircaseParams) -> int:
    gamma1, count = 1.0, 0
    while gamma1**2 > params.cutoff:
        gamma1 = f_step(gamma1, params.Delta)
        count += 1
    return count


_XX = np.kron(X, X)


def staircase_full(params: StaircaseParams) -> list[LocalOperator]:
    """2-local sequence taking |000> to |111> with P-weight at most Delta throughout.

    The second half runs the first half backwards after conjugating every
    step by X on all three qubits, which fixes span{|000>, |111>}.
    """
    half = staircase_half(params)
    mirrored = [LocalOperator(op.qubits, (_XX @ op.matrix @ _XX).conj().T) for op in reversed(half)]
    return half + mirrored


def ghz_projectors() -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto span{|000>} and span{|111>}."""
    S = np.zeros((8, 8), dtype=complex)
    T = np.zeros((8, 8), dtype=complex)
    S[0, 0] = 1
    T[7, 7] = 1
    return S, T
