"""Dense-matrix oracles over the flattened grid basis.

These matrices exist only for cross-validation at small grid sizes: every
spectral operation in the library has a brute-force counterpart here.  The
convention is the flattened *position* basis in subsystem order (C-order), with
amplitudes weighted by sqrt(cell volume) so that unitary operators are unitary
matrices.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import TooLarge
from .grids import POSITION, Grid1D, WaveFunction, to_representation
from .observables import Observable

MAX_DENSE_DIM = 4096


def _check_dim(subsystems) -> int:
    dim = 1
    for _, grid in subsystems:
        dim *= grid.n
    if dim > MAX_DENSE_DIM:
        raise TooLarge(f"flattened dimension {dim} exceeds the oracle cap {MAX_DENSE_DIM}")
    return dim


def fourier_matrix(grid: Grid1D) -> np.ndarray:
    """Unitary DFT matrix sending weighted position to weighted momentum amplitudes."""
    x = grid.positions()
    p = grid.momenta()
    return np.exp(-1j * np.outer(p, x)) / math.sqrt(grid.n)


class DenseOperator:
    """Explicit matrix over the flattened weighted position basis."""

    def __init__(self, matrix: np.ndarray, subsystems):
        self.subsystems = tuple((str(label), grid) for label, grid in subsystems)
        dim = _check_dim(self.subsystems)
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match dimension {dim}")
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi: WaveFunction) -> WaveFunction:
        """Matrix action on a state; returns the result in position representation."""
        work = to_representation(psi, POSITION)
        if work.subsystems != self.subsystems:
            raise ValueError("state and operator subsystems differ")
        weight = math.sqrt(work.cell_volume())
        vector = work.amplitudes.ravel() * weight
        out = (self.matrix @ vector) / weight
        return WaveFunction(
            work.subsystems,
            out.reshape(work.amplitudes.shape),
            POSITION,
            frame=work.frame,
        )

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if self.subsystems != other.subsystems:
            raise ValueError("operators act on different subsystem sets")
        return DenseOperator(self.matrix @ other.matrix, self.subsystems)


def _kron_all(blocks) -> np.ndarray:
    out = blocks[0]
    for block in blocks[1:]:
        out = np.kron(out, block)
    return out


def _axis_blocks(subsystems, label, block) -> np.ndarray:
    blocks = []
    for name, grid in subsystems:
        blocks.append(block if name == label else np.eye(grid.n))
    return _kron_all(blocks)


def dense_position(subsystems, label: str, power: int = 1) -> DenseOperator:
    """Position operator on one axis: diagonal in the position basis."""
    _check_dim(subsystems)
    grid = dict((str(l), g) for l, g in subsystems)[str(label)]
    block = np.diag(grid.positions().astype(complex) ** power)
    return DenseOperator(_axis_blocks(subsystems, str(label), block), subsystems)


def dense_momentum(subsystems, label: str, power: int = 1) -> DenseOperator:
    """Momentum operator on one axis: Fourier-conjugated diagonal."""
    _check_dim(subsystems)
    grid = dict((str(l), g) for l, g in subsystems)[str(label)]
    fourier = fourier_matrix(grid)
    block = fourier.conj().T @ np.diag(grid.momenta().astype(complex) ** power) @ fourier
    return DenseOperator(_axis_blocks(subsystems, str(label), block), subsystems)


def dense_observable(obs: Observable, subsystems) -> DenseOperator:
    """Brute-force matrix of a polynomial observable, Weyl ordering included."""
    dim = _check_dim(subsystems)
    labels = [str(label) for label, _ in subsystems]
    position = {label: dense_position(subsystems, label).matrix for label in labels}
    momentum = {label: dense_momentum(subsystems, label).matrix for label in labels}
    total = np.zeros((dim, dim), dtype=complex)
    for mono, coeff in obs.terms.items():
        term = np.eye(dim, dtype=complex)
        powers: dict[str, dict[str, int]] = {}
        for (label, kind), power in mono:
            if label not in labels:
                raise ValueError(f"observable references unknown axis {label!r}")
            powers.setdefault(label, {})[kind] = power
        for label in sorted(powers):
            m = powers[label].get("q", 0)
            n = powers[label].get("p", 0)
            q_mat = position[label]
            p_mat = momentum[label]
            if m == 0 or n == 0:
                factor = np.linalg.matrix_power(q_mat if n == 0 else p_mat, max(m, n))
            else:
                factor = np.zeros((dim, dim), dtype=complex)
                p_n = np.linalg.matrix_power(p_mat, n)
                for r in range(m + 1):
                    left = np.linalg.matrix_power(q_mat, r)
                    right = np.linalg.matrix_power(q_mat, m - r)
                    factor += (math.comb(m, r) / 2.0**m) * (left @ p_n @ right)
            term = term @ factor
        total += coeff * term
    return DenseOperator(total, subsystems)


def dense_shear(subsystems, pos_label: str, mom_label: str, sign: int = 1) -> DenseOperator:
    """exp(sign * i q_pos p_mom) built from its mixed-basis diagonalization.

    The generator is diagonal once pos_label is read in position and mom_label
    in momentum, so the exponential is the Fourier conjugation of a pure phase.
    Tests cross-check this against ``scipy.linalg.expm`` of the generator.
    """
    _check_dim(subsystems)
    grids = dict((str(l), g) for l, g in subsystems)
    x = grids[str(pos_label)].positions()
    p = grids[str(mom_label)].momenta()
    mixed = []
    phase_axes = []
    for name, grid in subsystems:
        if name == mom_label:
            mixed.append(fourier_matrix(grid))
            phase_axes.append(p)
        elif name == pos_label:
            mixed.append(np.eye(grid.n))
            phase_axes.append(x)
        else:
            mixed.append(np.eye(grid.n))
            phase_axes.append(np.zeros(grid.n))
    transform = _kron_all(mixed)
    # phase = exp(i sign x * p) over the (pos, mom) axes, constant elsewhere
    exponent = np.zeros(tuple(len(v) for v in phase_axes))
    pos_axis = [i for i, (name, _) in enumerate(subsystems) if name == pos_label][0]
    mom_axis = [i for i, (name, _) in enumerate(subsystems) if name == mom_label][0]
    shape_x = [1] * len(phase_axes)
    shape_x[pos_axis] = len(x)
    shape_p = [1] * len(phase_axes)
    shape_p[mom_axis] = len(p)
    exponent = exponent + x.reshape(shape_x) * p.reshape(shape_p)
    diag = np.exp(1j * sign * exponent).ravel()
    matrix = transform.conj().T @ (diag[:, None] * transform)
    return DenseOperator(matrix, subsystems)


def dense_total_momentum(subsystems) -> DenseOperator:
    """Sum of the momentum operators of every axis."""
    dim = _check_dim(subsystems)
    total = np.zeros((dim, dim), dtype=complex)
    for label, _ in subsystems:
        total += dense_momentum(subsystems, label).matrix
    return DenseOperator(total, subsystems)
