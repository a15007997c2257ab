"""Translation-invariant N-particle phase space and its gauge-fixed reductions.

The extended phase space carries canonical pairs (q_i, p_i) for N particles on
a line.  Total momentum P = sum_i p_i generates rigid translations and is
constrained to vanish; fixing the residual freedom by pinning one particle to
the origin (q_frame = 0) yields a reduced phase space holding the positions and
momenta of the remaining particles *relative to the frame particle*.  Moving
between two such reductions is a translation along the gauge flow, implemented
here as embed -> flow -> project.

Units are dimensionless naturals with hbar = 1 and unit masses by default.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, SameFrame

#: Absolute tolerance for membership in the constraint / gauge surfaces.
CONSTRAINT_TOL = 1e-9

#: Central-difference step for numerical Poisson brackets.
BRACKET_FD_STEP = 1e-5


@dataclass(frozen=True)
class FrameLabel:
    """Identifies the particle whose perspective a reduced description uses."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"frame index must be non-negative, got {self.index}")

    @property
    def name(self) -> str:
        """Letter name A, B, C, ... for the first 26 particles."""
        if self.index < 26:
            return string.ascii_uppercase[self.index]
        return f"P{self.index}"

    @classmethod
    def from_name(cls, name: str) -> "FrameLabel":
        name = name.strip().upper()
        if len(name) == 1 and name in string.ascii_uppercase:
            return cls(string.ascii_uppercase.index(name))
        raise ValueError(f"unrecognized frame name {name!r}")


FRAME_A = FrameLabel(0)
FRAME_B = FrameLabel(1)
FRAME_C = FrameLabel(2)


@dataclass(frozen=True)
class ParticleSystem:
    """Particle count and masses.  Unit masses unless configured otherwise."""

    n: int
    masses: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least two particles, got n={self.n}")
        masses = self.masses
        if masses is None:
            masses = np.ones(self.n)
        masses = np.asarray(masses, dtype=float)
        if masses.shape != (self.n,):
            raise ValueError(f"expected {self.n} masses, got shape {masses.shape}")
        if np.any(masses <= 0):
            raise ValueError("all masses must be positive")
        masses = masses.copy()
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)

    def check_frame(self, frame: FrameLabel) -> None:
        if frame.index >= self.n:
            raise ValueError(f"frame index {frame.index} out of range for n={self.n}")


def _frozen(values, length=None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d coordinate list, got shape {arr.shape}")
    if length is not None and arr.shape != (length,):
        raise ValueError(f"expected length {length}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ExtendedPhasePoint:
    """A point (q_1..q_N, p_1..p_N) of the full translation-redundant phase space."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q)
        p = _frozen(self.p, length=q.shape[0])
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class ReducedPhasePoint:
    """Relative coordinates of the non-frame particles, in ascending label order."""

    frame: FrameLabel
    q_rel: np.ndarray
    p_rel: np.ndarray

    def __post_init__(self):
        q_rel = _frozen(self.q_rel)
        p_rel = _frozen(self.p_rel, length=q_rel.shape[0])
        if self.frame.index > q_rel.shape[0]:
            raise ValueError("frame index exceeds particle count implied by coordinates")
        object.__setattr__(self, "q_rel", q_rel)
        object.__setattr__(self, "p_rel", p_rel)

    @property
    def n(self) -> int:
        """Total particle count, including the frame particle."""
        return self.q_rel.shape[0] + 1

    @property
    def labels(self) -> tuple[int, ...]:
        """Original indices of the surviving particles."""
        return tuple(i for i in range(self.n) if i != self.frame.index)


class Potential:
    """Translation-invariant interaction energy V({q_i - q_j}).

    Wraps an energy callable over the full position list plus an optional
    analytic gradient; missing gradients fall back to central finite
    differences with step ``fd_step``.
    """

    def __init__(self, energy, gradient=None, fd_step: float = 1e-6):
        self._energy = energy
        self._gradient = gradient
        self.fd_step = fd_step

    def __call__(self, q) -> float:
        return float(self._energy(np.asarray(q, dtype=float)))

    def gradient(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self._gradient is not None:
            return np.asarray(self._gradient(q), dtype=float)
        h = self.fd_step
        grad = np.empty_like(q)
        for i in range(q.shape[0]):
            shifted = q.copy()
            shifted[i] = q[i] + h
            plus = self._energy(shifted)
            shifted[i] = q[i] - h
            minus = self._energy(shifted)
            grad[i] = (plus - minus) / (2 * h)
        return grad

    def translation_defect(self, q, shift: float) -> float:
        """|V(q + shift) - V(q)|; zero (to rounding) for invariant potentials."""
        q = np.asarray(q, dtype=float)
        return abs(self(q + shift) - self(q))


#: The non-interacting system.
FREE_POTENTIAL = Potential(lambda q: 0.0, gradient=lambda q: np.zeros_like(q))


def spring_potential(springs) -> Potential:
    """Pairwise springs V = sum over (i, j, k) of k/2 (q_i - q_j)^2."""
    springs = [(int(i), int(j), float(k)) for i, j, k in springs]

    def energy(q):
        return sum(0.5 * k * (q[i] - q[j]) ** 2 for i, j, k in springs)

    def gradient(q):
        grad = np.zeros_like(q)
        for i, j, k in springs:
            pull = k * (q[i] - q[j])
            grad[i] += pull
            grad[j] -= pull
        return grad

    return Potential(energy, gradient=gradient)


def total_momentum(point: ExtendedPhasePoint) -> float:
    """Generator of rigid translations; |P| <= tol defines the constraint surface."""
    return float(np.sum(point.p))


def gauge_flow(point: ExtendedPhasePoint, s: float) -> ExtendedPhasePoint:
    """Translate every particle by the flow parameter s, momenta untouched."""
    return ExtendedPhasePoint(point.q + s, point.p)


def embed_reduced(rp: ReducedPhasePoint) -> ExtendedPhasePoint:
    """Place a reduced point on the constraint surface with its frame at the origin.

    The frame particle gets q = 0 and absorbs minus the total momentum of the
    others, so the image satisfies P = 0 and q_frame = 0 exactly.
    """
    n = rp.n
    q = np.zeros(n)
    p = np.zeros(n)
    others = list(rp.labels)
    q[others] = rp.q_rel
    p[others] = rp.p_rel
    p[rp.frame.index] = -np.sum(rp.p_rel)
    return ExtendedPhasePoint(q, p)


def project_reduced(
    point: ExtendedPhasePoint, frame: FrameLabel, tol: float = CONSTRAINT_TOL
) -> ReducedPhasePoint:
    """Drop the frame particle's coordinates from a gauge-fixed on-surface point."""
    if frame.index >= point.n:
        raise ValueError(f"frame index {frame.index} out of range for n={point.n}")
    momentum = total_momentum(point)
    if abs(momentum) > tol:
        raise ConstraintViolation(f"total momentum {momentum:.3e} exceeds tolerance {tol:.1e}")
    if abs(point.q[frame.index]) > tol:
        raise ConstraintViolation(
            f"gauge condition q_{frame.name} = {point.q[frame.index]:.3e} "
            f"exceeds tolerance {tol:.1e}"
        )
    others = [i for i in range(point.n) if i != frame.index]
    return ReducedPhasePoint(frame, point.q[others], point.p[others])


def classical_frame_switch(rp: ReducedPhasePoint, new_frame: FrameLabel) -> ReducedPhasePoint:
    """Re-describe a reduced point from the perspective of another particle.

    Embeds into the constraint surface, flows by s = -q_new until the new
    frame particle sits at the origin, and projects onto its reduction.
    """
    if new_frame == rp.frame:
        raise SameFrame(f"already in frame {rp.frame.name}")
    if new_frame.index >= rp.n:
        raise ValueError(f"frame index {new_frame.index} out of range for n={rp.n}")
    extended = embed_reduced(rp)
    shifted = gauge_flow(extended, -extended.q[new_frame.index])
    return project_reduced(shifted, new_frame)


def _fd_gradients(f, q, p, h):
    """Central-difference gradients of f(q, p) with respect to q and p."""
    n = q.shape[0]
    dq = np.empty(n)
    dp = np.empty(n)
    for i in range(n):
        qs = q.copy()
        qs[i] = q[i] + h
        plus = f(qs, p)
        qs[i] = q[i] - h
        minus = f(qs, p)
        dq[i] = (plus - minus) / (2 * h)
        ps = p.copy()
        ps[i] = p[i] + h
        plus = f(q, ps)
        ps[i] = p[i] - h
        minus = f(q, ps)
        dp[i] = (plus - minus) / (2 * h)
    return dq, dp


def poisson_bracket(f, g, point: ExtendedPhasePoint, h: float = BRACKET_FD_STEP) -> float:
    """{f, g} at a point, with gradients from central differences of step h."""
    fq, fp = _fd_gradients(f, point.q, point.p, h)
    gq, gp = _fd_gradients(g, point.q, point.p, h)
    return float(fq @ gp - fp @ gq)


def dirac_bracket(
    f, g, point: ExtendedPhasePoint, frame: FrameLabel, h: float = BRACKET_FD_STEP
) -> float:
    """Bracket on the surface gauge-fixed by chi = q_frame.

    {f,g}_D = {f,g} - {f,P}{chi,g} + {f,chi}{P,g} with P the total momentum.
    Phase-space functions are callables f(q, p); all brackets are evaluated
    numerically, so expect finite-difference noise of order h^2 on smooth
    non-polynomial arguments.
    """

    def chi(q, p):
        return q[frame.index]

    def momentum(q, p):
        return float(np.sum(p))

    return (
        poisson_bracket(f, g, point, h)
        - poisson_bracket(f, momentum, point, h) * poisson_bracket(chi, g, point, h)
        + poisson_bracket(f, chi, point, h) * poisson_bracket(momentum, g, point, h)
    )


def lagrangian_momenta(velocities) -> np.ndarray:
    """Legendre map of the invariant Lagrangian: p_i = v_i - mean(v).

    The image always lies on the constraint surface (components sum to zero).
    """
    v = np.asarray(velocities, dtype=float)
    return v - np.mean(v)


def position_coordinate(i: int):
    """Phase-space function q_i, convenient for bracket tables."""
    return lambda q, p: q[i]


def momentum_coordinate(i: int):
    """Phase-space function p_i, convenient for bracket tables."""
    return lambda q, p: p[i]
