"""Dense state-vector linear algebra for small qubit systems.

Qubit 0 is the most significant bit of a basis index, so applying X to
qubit 0 of ``|000>`` gives ``|100>`` (index 4).
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.stats import unitary_group


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-10
    hermitian: float = 1e-12
    compare: float = 1e-9
    norm: float = 1e-10


TOL = Tolerances()

# dense eigensolves above this many qubits are refused
MAX_EIG_QUBITS = 14
_DENSE_EIG_QUBITS = 10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        if self.n < 1:
            raise ValueError("qubit count must be positive")
        if amps.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} amplitudes, got {amps.shape[0]}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL.norm:
            raise ValueError(f"state not normalized (norm {norm!r})")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = True) -> StateVector:
        amps = np.asarray(amps, dtype=complex).ravel()
        n = round(np.log2(amps.size))
        if 2**n != amps.size:
            raise ValueError("amplitude count is not a power of two")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("zero vector")
            amps = amps / norm
        return cls(n, amps)

    @classmethod
    def basis(cls, bits: str | Sequence[int]) -> StateVector:
        """Computational basis state, e.g. ``StateVector.basis("010")``."""
        bits = [int(b) for b in bits]
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int("".join(map(str, bits)), 2) if bits else 0] = 1.0
        return cls(len(bits), amps)

    @classmethod
    def product(cls, factors: Iterable) -> StateVector:
        out = np.ones(1, dtype=complex)
        for f in factors:
            out = np.kron(out, np.asarray(f, dtype=complex))
        return cls.from_amplitudes(out)

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(self.n + other.n, np.kron(self.amps, other.amps))

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def distance(self, other: StateVector) -> float:
        return float(np.linalg.norm(self.amps - other.amps))

    def __repr__(self):
        return f"StateVector(n={self.n})"


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A ``2^j x 2^j`` matrix acting on an ordered list of ``j`` qubits."""

    qubits: tuple
    matrix: np.ndarray

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit index in {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError(f"negative qubit index in {qubits}")
        matrix = _frozen(self.matrix)
        dim = 2 ** len(qubits)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match {len(qubits)} qubits")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "matrix", matrix)

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def is_unitary(self, tol: float = TOL.unitary) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= tol)

    def is_hermitian(self, tol: float = TOL.hermitian) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m - m.conj().T)) <= tol)

    def dagger(self) -> LocalOperator:
        return LocalOperator(self.qubits, self.matrix.conj().T)

    def check_within(self, n: int) -> None:
        if any(q >= n for q in self.qubits):
            raise IndexError(f"qubits {self.qubits} out of range for {n}-qubit system")

    def __repr__(self):
        return f"LocalOperator(qubits={self.qubits})"


@dataclass(frozen=True, eq=False)
class Projector(LocalOperator):
    def __post_init__(self):
        super().__post_init__()
        m = self.matrix
        if not self.is_hermitian(TOL.unitary):
            raise ValueError("projector is not Hermitian")
        if np.max(np.abs(m @ m - m)) > TOL.unitary:
            raise ValueError("projector is not idempotent")


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    n: int
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            t.check_within(self.n)
            if not t.is_hermitian():
                raise ValueError(f"term on {t.qubits} is not Hermitian")
            if spectral_norm(t.matrix) > 1 + TOL.norm:
                raise ValueError(f"term on {t.qubits} has spectral norm above 1")
        object.__setattr__(self, "terms", terms)

    @property
    def locality(self) -> int:
        return max((t.arity for t in self.terms), default=0)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def to_sparse(self) -> sp.csr_matrix:
        dim = 2**self.n
        out = sp.csr_matrix((dim, dim), dtype=complex)
        for t in self.terms:
            out = out + embed_sparse(t, self.n)
        return out.tocsr()

    def to_dense(self) -> np.ndarray:
        if self.n > MAX_EIG_QUBITS:
            raise ValueError(f"refusing dense {self.n}-qubit matrix")
        return self.to_sparse().toarray()


def _apply_matrix(amps: np.ndarray, n: int, qubits: Sequence[int], matrix: np.ndarray) -> np.ndarray:
    """Contract ``matrix`` into the listed tensor legs of ``amps``."""
    j = len(qubits)
    if j == 0:
        return matrix[0, 0] * amps
    psi = amps.reshape((2,) * n)
    op = matrix.reshape((2,) * (2 * j))
    out = np.tensordot(op, psi, axes=(list(range(j, 2 * j)), list(qubits)))
    out = np.moveaxis(out, list(range(j)), list(qubits))
    return out.reshape(-1)


def apply_local(state: StateVector, op: LocalOperator) -> StateVector:
    op.check_within(state.n)
    if not op.is_unitary():
        raise ValueError(f"operator on {op.qubits} is not unitary")
    return StateVector(state.n, _apply_matrix(state.amps, state.n, op.qubits, op.matrix))


def apply_sequence(state: StateVector, ops: Iterable[LocalOperator]) -> list[StateVector]:
    """States after each operator (the input state is not included)."""
    out = []
    for op in ops:
        state = apply_local(state, op)
        out.append(state)
    return out


def expectation(state: StateVector, op: LocalOperator) -> complex:
    op.check_within(state.n)
    return complex(np.vdot(state.amps, _apply_matrix(state.amps, state.n, op.qubits, op.matrix)))


def energy(H: LocalHamiltonian, state: StateVector) -> float:
    if H.n != state.n:
        raise ValueError(f"Hamiltonian on {H.n} qubits, state on {state.n}")
    total = 0j
    for t in H.terms:
        total += expectation(state, t)
    if abs(total.imag) > TOL.norm:
        raise ValueError(f"energy has imaginary part {total.imag!r}")
    return float(total.real)


def _subsystem_index(n: int, qubits: Sequence[int]) -> np.ndarray:
    """``idx[r, s]`` = full basis index with ``qubits`` set to ``s`` and the rest to ``r``."""
    rest = [q for q in range(n) if q not in qubits]
    j = len(qubits)
    s_bits = (np.arange(2**j)[:, None] >> np.arange(j - 1, -1, -1)[None, :]) & 1
    r_bits = (np.arange(2 ** len(rest))[:, None] >> np.arange(len(rest) - 1, -1, -1)[None, :]) & 1
    s_val = (s_bits << (n - 1 - np.asarray(qubits, dtype=int))[None, :]).sum(axis=1) if j else np.zeros(1, int)
    r_val = (r_bits << (n - 1 - np.asarray(rest, dtype=int))[None, :]).sum(axis=1) if rest else np.zeros(1, int)
    return r_val[:, None] + s_val[None, :]


def embed_sparse(op: LocalOperator, n: int) -> sp.csr_matrix:
    op.check_within(n)
    idx = _subsystem_index(n, op.qubits)
    a, b = np.nonzero(op.matrix)
    rows = idx[:, a].ravel()
    cols = idx[:, b].ravel()
    data = np.broadcast_to(op.matrix[a, b], (idx.shape[0], a.size)).ravel()
    return sp.csr_matrix((data, (rows, cols)), shape=(2**n, 2**n))


def embed(op: LocalOperator, n: int) -> np.ndarray:
    return embed_sparse(op, n).toarray()


def min_eigenvalue(H: LocalHamiltonian) -> float:
    if H.n > MAX_EIG_QUBITS:
        raise ValueError(f"{H.n} qubits exceeds the eigensolver guard of {MAX_EIG_QUBITS}")
    if not H.terms:
        return 0.0
    if H.n <= _DENSE_EIG_QUBITS:
        return float(np.linalg.eigvalsh(H.to_dense())[0])
    vals = spla.eigsh(H.to_sparse(), k=1, which="SA", tol=1e-12, return_eigenvectors=False)
    return float(vals[0])


def spectrum(H: LocalHamiltonian) -> np.ndarray:
    if H.n > _DENSE_EIG_QUBITS:
        raise ValueError("full spectrum only computed up to 10 qubits")
    return np.linalg.eigvalsh(H.to_dense())


def _check_subset(n: int, keep: Iterable[int]) -> list[int]:
    keep = sorted(int(q) for q in keep)
    if len(set(keep)) != len(keep) or any(q < 0 or q >= n for q in keep):
        raise ValueError(f"invalid qubit subset {keep} for {n} qubits")
    return keep


def partial_outer(v: StateVector, w: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Trace of ``|v><w|`` over every qubit not in ``keep``."""
    if v.n != w.n:
        raise ValueError("states live on different qubit counts")
    keep = _check_subset(v.n, keep)
    n = v.n
    rest = [q for q in range(n) if q not in keep]
    vt = np.transpose(v.amps.reshape((2,) * n), keep + rest).reshape(2 ** len(keep), -1)
    wt = np.transpose(w.amps.reshape((2,) * n), keep + rest).reshape(2 ** len(keep), -1)
    return vt @ wt.conj().T


def reduced_density(v: StateVector, keep: Iterable[int]) -> np.ndarray:
    return partial_outer(v, v, keep)


def _square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def trace_norm(M) -> float:
    M = _square(M)
    if M.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def spectral_norm(M) -> float:
    M = _square(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def max_entry_norm(M) -> float:
    M = _square(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M)))


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=complex)))


def psd_sqrt(A: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(A)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def gentle_measurement_residual(rho, Lam) -> float:
    """Trace-norm disturbance ``||rho - sqrt(L) rho sqrt(L)||_tr``."""
    rho = _square(rho)
    Lam = _square(Lam)
    if rho.shape != Lam.shape:
        raise ValueError("rho and measurement operator differ in dimension")
    vals = np.linalg.eigvalsh((Lam + Lam.conj().T) / 2)
    if vals[0] < -TOL.compare or vals[-1] > 1 + TOL.compare:
        raise ValueError("measurement operator must satisfy 0 <= Lambda <= I")
    root = psd_sqrt((Lam + Lam.conj().T) / 2)
    return trace_norm(rho - root @ rho @ root)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=rng)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector.from_amplitudes(amps)


# frequently used gates
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def controlled(u: np.ndarray) -> np.ndarray:
    """Block diag(I, u): the first qubit controls ``u``."""
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out
