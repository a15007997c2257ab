"""Spectral wavefunctions on periodic tensor-product grids.

Discretization conventions (fixed throughout the library):

* ``Grid1D(n, length)`` samples positions x_j = (j - n/2) dx with dx = L/n and
  momenta p_k = (k - n/2) dp with dp = 2 pi / L, both in ascending order.
  n is a power of two, at least 8 (so n is divisible by 4, which makes the
  centered transform below phase-free).
* Representation changes use the symmetric ("1/sqrt(2 pi)") Fourier
  normalization, so position and momentum amplitudes share one norm formula:

      psi~(p_k) = dx / sqrt(2 pi) * sum_j exp(-i p_k x_j) psi(x_j),
      norm^2    = sum |amplitude|^2 * cell volume  (dx or dp per axis).

  On the centered grids this is an exact unitary (discrete Parseval), computed
  with one FFT and two alternating-sign vectors.
* States are expected to decay at the grid boundary in whichever
  representation they are examined; ``boundary_ratio`` measures this and the
  experiment runners treat a violation as a box-adequacy failure.

Wavefunctions are immutable values: every operation returns a new instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import FrameLabel
from .errors import AxisClash, GridMismatch, UnknownAxis

POSITION = "position"
MOMENTUM = "momentum"

_SQRT_2PI = math.sqrt(2.0 * math.pi)

#: Maximum boundary/peak amplitude ratio for a state to count as box-adequate.
BOUNDARY_DECAY_TOL = 1e-8


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid for one subsystem axis."""

    n: int
    length: float

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1) != 0:
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dp(self) -> float:
        return 2.0 * math.pi / self.length

    def positions(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    def momenta(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp

    def samples(self, representation: str) -> np.ndarray:
        if representation == POSITION:
            return self.positions()
        if representation == MOMENTUM:
            return self.momenta()
        raise ValueError(f"unknown representation {representation!r}")

    def cell(self, representation: str) -> float:
        return self.dx if representation == POSITION else self.dp

    def refined(self) -> "Grid1D":
        """Same box with doubled sampling (dx/2, unchanged dp)."""
        return Grid1D(2 * self.n, self.length)


def _alternating(n: int) -> np.ndarray:
    signs = np.ones(n)
    signs[1::2] = -1.0
    return signs


def _along_axis(vec: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = vec.shape[0]
    return vec.reshape(shape)


def _centered_fft(arr: np.ndarray, axis: int) -> np.ndarray:
    """DFT with both input and output indices centered at n/2 (n % 4 == 0)."""
    n = arr.shape[axis]
    signs = _along_axis(_alternating(n), arr.ndim, axis)
    return signs * np.fft.fft(arr * signs, axis=axis)


def _centered_ifft(arr: np.ndarray, axis: int) -> np.ndarray:
    n = arr.shape[axis]
    signs = _along_axis(_alternating(n), arr.ndim, axis)
    return signs * np.fft.ifft(arr * signs, axis=axis)


class WaveFunction:
    """Complex amplitudes over a tensor product of 1-d grids.

    Each axis carries a subsystem label, its grid, and a representation tag
    (position or momentum).  ``frame`` optionally records which particle's
    perspective the state describes.
    """

    __slots__ = ("_subsystems", "_representation", "_amplitudes", "frame")

    def __init__(self, subsystems, amplitudes, representation, frame: FrameLabel | None = None):
        subsystems = tuple((str(label), grid) for label, grid in subsystems)
        labels = [label for label, _ in subsystems]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate subsystem labels {labels}")
        if isinstance(representation, str):
            representation = (representation,) * len(subsystems)
        representation = tuple(representation)
        if len(representation) != len(subsystems):
            raise ValueError("one representation tag per axis required")
        for rep in representation:
            if rep not in (POSITION, MOMENTUM):
                raise ValueError(f"unknown representation {rep!r}")
        arr = np.array(amplitudes, dtype=complex)
        expected = tuple(grid.n for _, grid in subsystems)
        if arr.shape != expected:
            raise ValueError(f"amplitude shape {arr.shape} does not match grids {expected}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        arr.setflags(write=False)
        self._subsystems = subsystems
        self._representation = representation
        self._amplitudes = arr
        self.frame = frame

    @property
    def subsystems(self):
        return self._subsystems

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self._subsystems)

    @property
    def representation(self) -> tuple[str, ...]:
        return self._representation

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def ndim(self) -> int:
        return len(self._subsystems)

    def axis(self, label: str) -> int:
        for i, (name, _) in enumerate(self._subsystems):
            if name == label:
                return i
        raise UnknownAxis(f"no axis labelled {label!r} among {self.labels}")

    def grid(self, label: str) -> Grid1D:
        return self._subsystems[self.axis(label)][1]

    def rep(self, label: str) -> str:
        return self._representation[self.axis(label)]

    def cell_volume(self) -> float:
        volume = 1.0
        for (_, grid), rep in zip(self._subsystems, self._representation):
            volume *= grid.cell(rep)
        return volume

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self._amplitudes) ** 2)) * self.cell_volume())

    def normalized(self) -> "WaveFunction":
        norm = self.norm()
        if norm == 0:
            raise ValueError("cannot normalize the zero state")
        return self._with(self._amplitudes / norm)

    def boundary_ratio(self) -> float:
        """max |amplitude| on the grid boundary over max |amplitude| overall."""
        magnitude = np.abs(self._amplitudes)
        peak = float(magnitude.max())
        if peak == 0:
            return 0.0
        edge = 0.0
        for axis in range(self.ndim):
            edge = max(edge, float(np.take(magnitude, 0, axis=axis).max()))
            edge = max(edge, float(np.take(magnitude, -1, axis=axis).max()))
        return edge / peak

    def _with(self, amplitudes, representation=None, subsystems=None, frame=None):
        return WaveFunction(
            subsystems if subsystems is not None else self._subsystems,
            amplitudes,
            representation if representation is not None else self._representation,
            frame=frame if frame is not None else self.frame,
        )

    def __repr__(self):
        axes = ", ".join(
            f"{label}:{grid.n}@{rep[:3]}"
            for (label, grid), rep in zip(self._subsystems, self._representation)
        )
        tag = f", frame={self.frame.name}" if self.frame is not None else ""
        return f"WaveFunction({axes}{tag})"


def change_representation(psi: WaveFunction, label: str, target: str) -> WaveFunction:
    """Fourier-transform one axis between position and momentum representations.

    Unitary on the centered grids: the norm and round trips are exact up to
    FFT rounding.
    """
    if target not in (POSITION, MOMENTUM):
        raise ValueError(f"unknown representation {target!r}")
    axis = psi.axis(label)
    if psi.representation[axis] == target:
        return psi
    grid = psi.subsystems[axis][1]
    if target == MOMENTUM:
        arr = _centered_fft(psi.amplitudes, axis) * (grid.dx / _SQRT_2PI)
    else:
        arr = _centered_ifft(psi.amplitudes, axis) * (_SQRT_2PI / grid.dx)
    representation = list(psi.representation)
    representation[axis] = target
    return psi._with(arr, representation=tuple(representation))


def to_representation(psi: WaveFunction, target: str) -> WaveFunction:
    """Bring every axis into the same representation."""
    for label in psi.labels:
        psi = change_representation(psi, label, target)
    return psi


def _check_compatible(psi: WaveFunction, phi: WaveFunction) -> None:
    if psi.labels != phi.labels:
        raise GridMismatch(f"axis labels differ: {psi.labels} vs {phi.labels}")
    if psi.subsystems != phi.subsystems:
        raise GridMismatch("grids differ between states")
    if psi.representation != phi.representation:
        raise GridMismatch(
            f"representations differ: {psi.representation} vs {phi.representation}"
        )


def inner_product(psi: WaveFunction, phi: WaveFunction) -> complex:
    """<psi|phi>, conjugate-linear in the first argument."""
    _check_compatible(psi, phi)
    return complex(np.vdot(psi.amplitudes, phi.amplitudes) * psi.cell_volume())


def fidelity(psi: WaveFunction, phi: WaveFunction) -> float:
    """Phase-insensitive overlap |<psi|phi>|^2 of the normalized states."""
    psi = to_representation(psi, MOMENTUM)
    phi = to_representation(phi, MOMENTUM)
    if psi.labels != phi.labels:
        phi = with_axis_order(phi, psi.labels)
    overlap = abs(inner_product(psi, phi)) ** 2
    return overlap / (psi.norm() ** 2 * phi.norm() ** 2)


def apply_shear_phase(
    psi: WaveFunction, pos_axis: str, mom_axis: str, sign: int = 1
) -> WaveFunction:
    """Apply exp(sign * i q_pos p_mom), diagonal in the mixed representation.

    With pos_axis read in position and mom_axis in momentum this is a pure
    phase, hence exactly unitary; in full position representation it shifts
    the mom_axis argument by the pos_axis coordinate (modulo the box).
    The output keeps the input's representation tags.
    """
    if pos_axis == mom_axis:
        raise AxisClash(f"shear needs two distinct axes, got {pos_axis!r} twice")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    original = psi.representation
    work = change_representation(psi, pos_axis, POSITION)
    work = change_representation(work, mom_axis, MOMENTUM)
    i = work.axis(pos_axis)
    j = work.axis(mom_axis)
    x = _along_axis(work.subsystems[i][1].positions(), work.ndim, i)
    p = _along_axis(work.subsystems[j][1].momenta(), work.ndim, j)
    sheared = work._with(work.amplitudes * np.exp(1j * sign * x * p))
    for label, rep in zip(psi.labels, original):
        sheared = change_representation(sheared, label, rep)
    return sheared


def reflect_axis(psi: WaveFunction, label: str) -> WaveFunction:
    """Parity on one axis: amplitude at sample s moves to sample -s.

    The same index permutation implements the reflection in either
    representation (parity commutes with the Fourier transform).
    """
    axis = psi.axis(label)
    n = psi.subsystems[axis][1].n
    index = (-np.arange(n)) % n
    return psi._with(np.take(psi.amplitudes, index, axis=axis))


def with_axis_order(psi: WaveFunction, labels) -> WaveFunction:
    """Transpose the tensor axes into the requested label order."""
    labels = tuple(labels)
    if set(labels) != set(psi.labels):
        raise UnknownAxis(f"cannot reorder {psi.labels} as {labels}")
    perm = [psi.axis(label) for label in labels]
    subsystems = tuple(psi.subsystems[i] for i in perm)
    representation = tuple(psi.representation[i] for i in perm)
    return WaveFunction(
        subsystems,
        np.transpose(psi.amplitudes, perm),
        representation,
        frame=psi.frame,
    )


def relabel_axis(psi: WaveFunction, old: str, new: str, frame=None) -> WaveFunction:
    """Rename one subsystem label, optionally retagging the frame."""
    axis = psi.axis(old)
    subsystems = list(psi.subsystems)
    subsystems[axis] = (new, subsystems[axis][1])
    return WaveFunction(
        subsystems,
        psi.amplitudes,
        psi.representation,
        frame=frame if frame is not None else psi.frame,
    )


def gaussian_state(
    grid: Grid1D,
    label: str,
    alpha: float = 1.0,
    center: float = 0.0,
    momentum: float = 0.0,
    frame: FrameLabel | None = None,
) -> WaveFunction:
    """Normalized Gaussian exp(-alpha (x - c)^2 / 2 + i k x) on one axis."""
    x = grid.positions()
    amp = np.exp(-0.5 * alpha * (x - center) ** 2 + 1j * momentum * x)
    psi = WaveFunction([(label, grid)], amp, POSITION, frame=frame)
    return psi.normalized()


def ho_eigenstate(grid: Grid1D, label: str, level: int, alpha: float = 1.0) -> WaveFunction:
    """Oscillator eigenstate of width parameter alpha (levels 0 and 1).

    psi0 = (alpha/pi)^(1/4) exp(-alpha x^2 / 2),
    psi1 = sqrt(2) (alpha^3/pi)^(1/4) x exp(-alpha x^2 / 2).
    """
    if level not in (0, 1):
        raise ValueError(f"only levels 0 and 1 are provided, got {level}")
    x = grid.positions()
    envelope = np.exp(-0.5 * alpha * x**2)
    if level == 0:
        amp = (alpha / np.pi) ** 0.25 * envelope
    else:
        amp = math.sqrt(2.0) * (alpha**3 / np.pi) ** 0.25 * x * envelope
    return WaveFunction([(label, grid)], amp, POSITION).normalized()


def product_state(
    a: WaveFunction, b: WaveFunction, frame: FrameLabel | None = None
) -> WaveFunction:
    """Tensor product of two single-axis states."""
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("product_state expects single-axis factors")
    amplitudes = np.multiply.outer(a.amplitudes, b.amplitudes)
    return WaveFunction(
        a.subsystems + b.subsystems,
        amplitudes,
        a.representation + b.representation,
        frame=frame,
    )


def random_wavefunction(
    subsystems,
    rng: np.random.Generator,
    terms: int = 4,
    frame: FrameLabel | None = None,
) -> WaveFunction:
    """Seeded random superposition of displaced Gaussians, boundary-safe.

    Widths, centers and momenta are drawn from narrow ranges so that the
    state decays below the boundary tolerance in both representations on the
    default boxes.
    """
    subsystems = tuple((str(label), grid) for label, grid in subsystems)
    grids = [grid for _, grid in subsystems]
    meshes = np.meshgrid(*[g.positions() for g in grids], indexing="ij")
    total = np.zeros(tuple(g.n for g in grids), dtype=complex)
    for _ in range(terms):
        coeff = rng.normal() + 1j * rng.normal()
        term = np.ones_like(total) * coeff
        for mesh in meshes:
            alpha = rng.uniform(0.8, 2.5)
            center = rng.uniform(-1.5, 1.5)
            kick = rng.uniform(-1.5, 1.5)
            term = term * np.exp(-0.5 * alpha * (mesh - center) ** 2 + 1j * kick * mesh)
        total += term
    psi = WaveFunction(subsystems, total, POSITION, frame=frame)
    return psi.normalized()
