"""k-orthogonality of states and subspaces.

Two states are k-orthogonal when no unitary on k qubits creates overlap
between them. Equivalently every partial trace of ``|v><w|`` down to at
most k qubits vanishes, or every pair of reduced states on the complement
of at most k qubits has zero product.
"""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .qcore import (
    I2,
    TOL,
    StateVector,
    X,
    Y,
    Z,
    _apply_matrix,
    haar_unitary,
    partial_outer,
    reduced_density,
    trace_norm,
)

DEFAULT_TOL = TOL.compare


@dataclass(frozen=True, eq=False)
class Subspace:
    n: int
    basis: tuple

    def __post_init__(self):
        basis = tuple(self.basis)
        for b in basis:
            if b.n != self.n:
                raise ValueError("basis vector on wrong qubit count")
        if basis:
            G = np.array([[u.inner(v) for v in basis] for u in basis])
            if np.max(np.abs(G - np.eye(len(basis)))) > TOL.norm:
                raise ValueError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def projector(self) -> np.ndarray:
        dim = 2**self.n
        P = np.zeros((dim, dim), dtype=complex)
        for b in self.basis:
            P += np.outer(b.amps, b.amps.conj())
        return P

    @classmethod
    def from_projector(cls, P: np.ndarray, tol: float = 1e-8) -> Subspace:
        vals, vecs = np.linalg.eigh(P)
        n = round(np.log2(P.shape[0]))
        cols = [vecs[:, i] for i in range(len(vals)) if vals[i] > 1 - tol]
        return cls(n, tuple(StateVector(n, c) for c in cols))

    @classmethod
    def from_bitstrings(cls, n: int, strings) -> Subspace:
        return cls(n, tuple(StateVector.basis(format(s, f"0{n}b") if isinstance(s, int) else s) for s in strings))


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")


def subsets_up_to(n: int, k: int) -> Iterator[tuple]:
    for size in range(k + 1):
        yield from combinations(range(n), size)


def max_partial_overlap(v: StateVector, w: StateVector, k: int) -> tuple[float, tuple]:
    """Largest trace norm of a partial outer product over subsets of size <= k."""
    best, where = 0.0, ()
    for keep in subsets_up_to(v.n, k):
        val = trace_norm(partial_outer(v, w, keep))
        if val > best:
            best, where = val, keep
    return best, where


def k_orth_states(v: StateVector, w: StateVector, k: int, tol: float = DEFAULT_TOL) -> bool:
    if v.n != w.n:
        raise ValueError("states live on different qubit counts")
    _check_k(v.n, k)
    return all(trace_norm(partial_outer(v, w, keep)) <= tol for keep in subsets_up_to(v.n, k))


def k_orth_density(v: StateVector, w: StateVector, k: int, tol: float = DEFAULT_TOL) -> bool:
    if v.n != w.n:
        raise ValueError("states live on different qubit counts")
    n = v.n
    _check_k(n, k)
    for traced in subsets_up_to(n, k):
        rest = [q for q in range(n) if q not in traced]
        if rest:
            prod = reduced_density(v, rest) @ reduced_density(w, rest)
        else:
            prod = np.ones((1, 1))
        if trace_norm(prod) > tol:
            return False
    return True


def k_orth_subspaces(S: Subspace, T: Subspace, k: int, tol: float = DEFAULT_TOL) -> bool:
    if S.n != T.n:
        raise ValueError("subspaces live on different qubit counts")
    _check_k(S.n, k)
    return all(k_orth_states(v, w, k, tol) for v in S.basis for w in T.basis)


def _pauli_probes(k: int):
    paulis = [I2, X, Y, Z]

    def rec(j):
        if j == 0:
            yield np.ones((1, 1), dtype=complex)
            return
        for rest in rec(j - 1):
            for p in paulis:
                yield np.kron(rest, p)

    return list(rec(k))


def svd_probe(v: StateVector, w: StateVector, keep) -> np.ndarray:
    """Unitary on ``keep`` maximizing ``|<w|U|v>|``.

    With ``A = tr_rest |v><w| = W S V^dag`` the choice ``U = V W^dag`` gives
    ``<w|U|v> = tr(U A) = tr(S)``, the trace norm of ``A``.
    """
    A = partial_outer(v, w, keep)
    W, _, Vh = np.linalg.svd(A)
    return Vh.conj().T @ W.conj().T


def probe_overlap(v: StateVector, w: StateVector, k: int) -> float:
    """Deterministic lower bound on ``max |<w|U|v>|`` over k-local unitaries.

    Tries every Pauli string and the SVD-built unitary on every subset of
    size at most k.
    """
    best = 0.0
    n = v.n
    for keep in subsets_up_to(n, k):
        if not keep:
            best = max(best, abs(np.vdot(w.amps, v.amps)))
            continue
        probes = _pauli_probes(len(keep)) + [svd_probe(v, w, keep)]
        for U in probes:
            best = max(best, abs(np.vdot(w.amps, _apply_matrix(v.amps, n, keep, U))))
    return float(best)


def k_orth_bruteforce(v: StateVector, w: StateVector, k: int, trials: int, seed: int) -> float:
    """Largest ``|<w|U|v>|`` over ``trials`` Haar unitaries on random k-subsets."""
    if trials < 1:
        raise ValueError("trials must be positive")
    _check_k(v.n, k)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        keep = tuple(sorted(rng.choice(v.n, size=k, replace=False)))
        U = haar_unitary(2**k, rng)
        best = max(best, abs(np.vdot(w.amps, _apply_matrix(v.amps, v.n, keep, U))))
    return float(best)
