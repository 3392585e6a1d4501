"""Discretizations of unitary groups.

``SingleQubitNet`` is an exact net over 2x2 unitaries built from the
four-parameter form

    [[sqrt(x) e^{i p1},   sqrt(1-x) e^{i p2}],
     [sqrt(1-x) e^{i p3], sqrt(x) e^{i p4}]],   p4 = -p1 + p2 + p3 + pi.

``PseudoNet`` is a relaxed net over d x d unitaries: each matrix entry is
snapped to a square lattice on the unit disk, a check accepts matrices
whose columns are nearly orthonormal and a rounding step maps accepted
matrices to nearby unitaries.

Neither net is ever materialized; elements are produced from indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qcore import TOL, spectral_norm

TWO_PI = 2 * math.pi


class NetIndex(NamedTuple):
    x: int
    p1: int
    p2: int
    p3: int


def _round_half_down(v):
    """Nearest integer, ties toward the lower one."""
    return np.ceil(np.asarray(v) - 0.5).astype(np.int64)


def _wrap(phase: float) -> float:
    return phase % TWO_PI


@dataclass(frozen=True)
class SingleQubitNet:
    eps: float
    delta: float
    n_x: int
    n_phase: int

    @classmethod
    def from_eps(cls, eps: float) -> SingleQubitNet:
        """Net whose pitch ``eps**2 / 64`` guarantees spectral covering radius ``eps``."""
        if not 0 < eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        delta = eps * eps / 64
        return cls(eps, delta, math.ceil(1 / delta), math.ceil(TWO_PI / delta))

    @classmethod
    def from_grid(cls, n_x: int, n_phase: int) -> SingleQubitNet:
        """Coarse net with ``n_x + 1`` values of x and ``n_phase`` values per phase.

        ``eps`` is the certified covering radius (capped at 2, the diameter
        of the unitary group): snapping moves x by at most ``1/(2 n_x)`` and
        each phase by at most ``pi/n_phase``.
        """
        if n_x < 1 or n_phase < 1:
            raise ValueError("grid sizes must be positive")
        bound = 2 * (3 * math.pi / n_phase + math.sqrt(1 / (2 * n_x)))
        return cls(min(2.0, bound), max(1 / n_x, TWO_PI / n_phase), n_x, n_phase)

    @property
    def size(self) -> int:
        return (self.n_x + 1) * self.n_phase**3

    def params(self, idx: NetIndex) -> tuple[float, float, float, float]:
        self._check(idx)
        h = TWO_PI / self.n_phase
        return idx.x / self.n_x, idx.p1 * h, idx.p2 * h, idx.p3 * h

    def _check(self, idx: NetIndex) -> None:
        if not (0 <= idx.x <= self.n_x and all(0 <= p < self.n_phase for p in idx[1:])):
            raise IndexError(f"net index {tuple(idx)} out of range")

    def __iter__(self):
        for x in range(self.n_x + 1):
            for p1 in range(self.n_phase):
                for p2 in range(self.n_phase):
                    for p3 in range(self.n_phase):
                        yield NetIndex(x, p1, p2, p3)


def unitary_from_params(x: float, p1: float, p2: float, p3: float) -> np.ndarray:
    p4 = -p1 + p2 + p3 + math.pi
    a, b = math.sqrt(x), math.sqrt(1 - x)
    return np.array(
        [[a * np.exp(1j * p1), b * np.exp(1j * p2)], [b * np.exp(1j * p3), a * np.exp(1j * p4)]]
    )


def params_from_unitary(U: np.ndarray) -> tuple[float, float, float, float]:
    """Invert the four-parameter form.

    Phases of the larger pair of entries are read directly; the remaining
    phase is solved from ``p4 = -p1 + p2 + p3 + pi`` so the relation holds
    exactly. Phases of zero entries are 0.
    """
    U = np.asarray(U, dtype=complex)
    x = float(min(1.0, max(0.0, abs(U[0, 0]) ** 2)))

    def arg(z):
        return _wrap(float(np.angle(z))) if z != 0 else 0.0

    if x >= 0.5:
        p1 = arg(U[0, 0])
        p2 = arg(U[0, 1])
        p3 = _wrap(arg(U[1, 1]) + p1 - p2 - math.pi)
    else:
        p2 = arg(U[0, 1])
        p3 = arg(U[1, 0])
        p1 = _wrap(p2 + p3 + math.pi - arg(U[1, 1])) if U[1, 1] != 0 else 0.0
    return x, p1, p2, p3


def net_element(net: SingleQubitNet, idx: NetIndex) -> np.ndarray:
    return unitary_from_params(*net.params(NetIndex(*idx)))


def net_snap(net: SingleQubitNet, U: np.ndarray) -> NetIndex:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError("net_snap takes a 2x2 matrix")
    if np.max(np.abs(U @ U.conj().T - np.eye(2))) > TOL.unitary:
        raise ValueError("net_snap requires a unitary input")
    x, p1, p2, p3 = params_from_unitary(U)
    h = TWO_PI / net.n_phase
    jx = int(np.clip(_round_half_down(x * net.n_x), 0, net.n_x))
    ps = [int(_round_half_down(p / h)) % net.n_phase for p in (p1, p2, p3)]
    return NetIndex(jx, *ps)


def net_round(net: SingleQubitNet, U: np.ndarray) -> np.ndarray:
    return net_element(net, net_snap(net, U))


def canonical_index(net: SingleQubitNet, idx: NetIndex) -> NetIndex:
    """Representative index of the element ``idx`` names.

    Indices with x = 0 (or x = 1) that differ only in phases the element
    does not depend on collapse to one representative.
    """
    return net_snap(net, net_element(net, idx))


# --------------------------------------------------------------------------
# pseudo-net


@dataclass(frozen=True)
class PseudoNet:
    d: int
    eps: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("pseudo-net dimension must be at least 2")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")

    @property
    def delta_prime(self) -> float:
        return self.eps / (6 * self.d * (self.d + self.eps))

    @property
    def delta(self) -> float:
        return self.delta_prime / math.sqrt(self.d)

    @property
    def check_threshold(self) -> float:
        return self.eps / (2 * (self.d + self.eps))

    @property
    def radius(self) -> int:
        """Lattice half-width in units of ``delta``."""
        return math.ceil(1 / self.delta)

    @property
    def entry_grid_size(self) -> int:
        return (2 * self.radius + 1) ** 2

    @property
    def cardinality(self) -> int:
        return self.entry_grid_size ** (self.d * self.d)

    def entry_value(self, a, b):
        """Lattice point ``(a, b) * delta``, pulled radially onto the disk if outside."""
        z = (np.asarray(a) + 1j * np.asarray(b)) * self.delta
        r = np.abs(z)
        return np.where(r > 1, z / np.where(r > 1, r, 1), z)

    def matrix(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape != (self.d, self.d, 2):
            raise ValueError(f"coordinates must have shape ({self.d}, {self.d}, 2)")
        if np.any(np.abs(coords) > self.radius):
            raise IndexError("lattice coordinate outside the grid")
        return self.entry_value(coords[..., 0], coords[..., 1])

    def index_of(self, coords) -> int:
        """Position of ``coords`` in the row-major ordering of the net."""
        coords = np.asarray(coords, dtype=np.int64)
        side = 2 * self.radius + 1
        per_entry = (coords[..., 0] + self.radius) * side + (coords[..., 1] + self.radius)
        out = 0
        for v in per_entry.ravel():
            out = out * self.entry_grid_size + int(v)
        return out

    def coords_of(self, index: int) -> np.ndarray:
        if not 0 <= index < self.cardinality:
            raise IndexError("pseudo-net index out of range")
        side = 2 * self.radius + 1
        flat = []
        for _ in range(self.d * self.d):
            index, v = divmod(index, self.entry_grid_size)
            flat.append(divmod(v, side))
        flat.reverse()
        coords = np.array(flat, dtype=np.int64).reshape(self.d, self.d, 2)
        return coords - self.radius


def _check_dim(M: np.ndarray, net: PseudoNet) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (net.d, net.d):
        raise ValueError(f"expected a {net.d}x{net.d} matrix, got {M.shape}")
    return M


def column_gram(M: np.ndarray) -> np.ndarray:
    """Sum of ``|u_i><u_i|`` over the columns ``u_i`` of ``M``."""
    return M @ M.conj().T


def pseudo_check_C(M: np.ndarray, net: PseudoNet) -> bool:
    M = _check_dim(M, net)
    return spectral_norm(column_gram(M) - np.eye(net.d)) <= net.check_threshold


def pseudo_round_R(M: np.ndarray, net: PseudoNet) -> np.ndarray:
    M = _check_dim(M, net)
    if not pseudo_check_C(M, net):
        raise ValueError("matrix rejected by the check; rounding is undefined")
    B = column_gram(M)
    vals, vecs = np.linalg.eigh(B)
    inv_root = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return inv_root @ M


def pseudo_snap_coords(U: np.ndarray, net: PseudoNet) -> np.ndarray:
    U = _check_dim(U, net)
    if np.max(np.abs(U @ U.conj().T - np.eye(net.d))) > TOL.unitary:
        raise ValueError("pseudo_snap requires a unitary input")
    a = _round_half_down(U.real / net.delta)
    b = _round_half_down(U.imag / net.delta)
    return np.stack([a, b], axis=-1)


def pseudo_snap(U: np.ndarray, net: PseudoNet) -> np.ndarray:
    return net.matrix(pseudo_snap_coords(U, net))


__all__ = [
    "NetIndex",
    "PseudoNet",
    "SingleQubitNet",
    "canonical_index",
    "column_gram",
    "net_element",
    "net_round",
    "net_snap",
    "params_from_unitary",
    "pseudo_check_C",
    "pseudo_round_R",
    "pseudo_snap",
    "pseudo_snap_coords",
    "unitary_from_params",
]
