"""Unitary switches between quantum frame perspectives.

Two independent backends realize the same map from a frame-F1 reduction to a
frame-F2 reduction (F2 one of F1's axes, R the remaining particle):

* ``parity-shear``: apply the diagonal unitary exp(i q_F2 p_R), then the
  parity swap that sends the F2 axis to the F1 slot with a sign flip
  (momentum eigenstates |p>_F2 -> |-p>_F1).
* ``compositional``: the exact momentum-grid substitution used by
  :func:`qrf.physical.momentum_substitution`, i.e. re-expressing the state
  through its gauge-invariant description.

Their agreement on random states is the library's standing cross-validation
of the switch; observables transform by the linear dictionary that mirrors
the classical coordinate change, which Weyl ordering turns into plain symbol
substitution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classical import FrameLabel
from .dynamics import OscillatorParams
from .errors import FrameMismatch, UnsupportedObservable
from .grids import (
    WaveFunction,
    apply_shear_phase,
    change_representation,
    fidelity,
    reflect_axis,
    relabel_axis,
    with_axis_order,
)
from .observables import Observable
from .physical import LETTERS, momentum_substitution, reduced_labels, reduced_quantum_hamiltonian

BACKENDS = ("parity-shear", "compositional")


@dataclass(frozen=True)
class FrameSwitch:
    """A directed frame change with a choice of implementation backend."""

    from_frame: FrameLabel
    to_frame: FrameLabel
    backend: str = "parity-shear"

    def __post_init__(self):
        if self.from_frame == self.to_frame:
            raise ValueError("from_frame and to_frame must differ")
        for frame in (self.from_frame, self.to_frame):
            if frame.index not in (0, 1, 2):
                raise ValueError("quantum switches are defined for particles A, B, C")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")

    @property
    def remaining(self) -> str:
        """Label of the particle that is neither the old nor the new frame."""
        return next(
            l for l in LETTERS if l not in (self.from_frame.name, self.to_frame.name)
        )

    def reversed(self) -> "FrameSwitch":
        return FrameSwitch(self.to_frame, self.from_frame, self.backend)


def switch_frame(psi: WaveFunction, sw: FrameSwitch) -> WaveFunction:
    """Map a frame-`from` reduced state to the frame-`to` reduction."""
    if psi.frame != sw.from_frame:
        raise FrameMismatch(
            f"state is tagged {psi.frame.name if psi.frame else None}, "
            f"switch expects {sw.from_frame.name}"
        )
    if psi.labels != reduced_labels(sw.from_frame):
        raise FrameMismatch(
            f"frame {sw.from_frame.name} reduction must have axes "
            f"{reduced_labels(sw.from_frame)}, got {psi.labels}"
        )
    if sw.backend == "compositional":
        out = momentum_substitution(psi, sw.to_frame)
        # restore the caller's representation tags on the relabeled axes
        out = change_representation(out, sw.from_frame.name, psi.rep(sw.to_frame.name))
        out = change_representation(out, sw.remaining, psi.rep(sw.remaining))
        return out
    sheared = apply_shear_phase(psi, pos_axis=sw.to_frame.name, mom_axis=sw.remaining, sign=1)
    swapped = reflect_axis(sheared, sw.to_frame.name)
    renamed = relabel_axis(swapped, sw.to_frame.name, sw.from_frame.name, frame=sw.to_frame)
    return with_axis_order(renamed, reduced_labels(sw.to_frame))


def switch_dictionary(sw: FrameSwitch) -> dict:
    """Substitutions sending old reduced symbols to new-frame symbols.

    Mirrors the classical coordinate change: with old frame F1, new frame F2
    and remaining particle R,

        q_F2 -> -q'_F1,          p_F2 -> -p'_F1 - p'_R,
        q_R  -> q'_R - q'_F1,    p_R  -> p'_R.
    """
    old_name = sw.from_frame.name
    new_name = sw.to_frame.name
    rem = sw.remaining
    return {
        (new_name, "q"): -1 * Observable.position(old_name),
        (new_name, "p"): -1 * Observable.momentum(old_name) - Observable.momentum(rem),
        (rem, "q"): Observable.position(rem) - Observable.position(old_name),
        (rem, "p"): Observable.momentum(rem),
    }


def conjugate_observable(obs: Observable, sw: FrameSwitch) -> Observable:
    """Transform a polynomial observable along the switch: S O S^dagger.

    Weyl ordering is covariant under the linear dictionary, so the operator
    transformation is the symbol substitution.
    """
    allowed = set(reduced_labels(sw.from_frame))
    used = obs.labels()
    if not used <= allowed:
        raise UnsupportedObservable(
            f"observable uses axes {sorted(used - allowed)} outside the "
            f"frame-{sw.from_frame.name} reduction"
        )
    return obs.substitute(switch_dictionary(sw))


@dataclass(frozen=True)
class CommutationReport:
    """Fidelity between evolve-then-switch and switch-then-evolve."""

    t: float
    dt: float
    fidelity: float
    evolve_first_norm: float
    switch_first_norm: float


def dynamics_frame_commutation(
    psi: WaveFunction,
    params: OscillatorParams,
    t: float,
    dt: float = 1e-3,
    sw: FrameSwitch | None = None,
) -> CommutationReport:
    """Check that time evolution commutes with the frame switch.

    The state is evolved under the old frame's oscillator Hamiltonian and then
    switched, versus switched and then evolved under the new frame's
    Hamiltonian for the same springs and masses.
    """
    if sw is None:
        if psi.frame is None:
            raise FrameMismatch("state carries no frame tag")
        sw = FrameSwitch(psi.frame, FrameLabel(0) if psi.frame.index != 0 else FrameLabel(2))
    if t < 0:
        raise ValueError("t must be non-negative")
    system = params.system()
    potential = params.potential()
    h_old = reduced_quantum_hamiltonian(sw.from_frame, potential, system, psi.subsystems)
    evolved = h_old.evolve(psi, t, dt) if t > 0 else psi
    path_one = switch_frame(evolved, sw)
    switched = switch_frame(psi, sw)
    h_new = reduced_quantum_hamiltonian(sw.to_frame, potential, system, switched.subsystems)
    path_two = h_new.evolve(switched, t, dt) if t > 0 else switched
    return CommutationReport(
        t=t,
        dt=dt,
        fidelity=fidelity(path_one, path_two),
        evolve_first_norm=path_one.norm(),
        switch_first_norm=path_two.norm(),
    )
