import numpy as np
import pytest

from qrf.classical import (
    FRAME_A,
    FRAME_B,
    FRAME_C,
    ReducedPhasePoint,
    classical_frame_switch,
)
from qrf.dynamics import OscillatorParams
from qrf.errors import FrameMismatch, UnsupportedObservable
from qrf.grids import (
    MOMENTUM,
    fidelity,
    ho_eigenstate,
    product_state,
    random_wavefunction,
    to_representation,
)
from qrf.observables import Observable
from qrf.physical import physical_state, reduced_labels, reduced_quantum_hamiltonian, reexpress
from qrf.switching import (
    BACKENDS,
    FrameSwitch,
    conjugate_observable,
    dynamics_frame_commutation,
    switch_dictionary,
    switch_frame,
)
from qrf.wigner import entanglement_entropy

# grid-converged entropy of the switched equal-width product ground state
SWITCHED_GROUND_ENTROPY = 0.5533032997


def two_axis_state(grid, rng, frame=FRAME_A):
    return random_wavefunction([(l, grid) for l in reduced_labels(frame)], rng, frame=frame)


class TestFrameSwitch:
    def test_validation(self):
        with pytest.raises(ValueError):
            FrameSwitch(FRAME_A, FRAME_A)
        with pytest.raises(ValueError):
            FrameSwitch(FRAME_A, FRAME_C, backend="magic")
        assert FrameSwitch(FRAME_A, FRAME_C).remaining == "B"
        assert FrameSwitch(FRAME_B, FRAME_C).remaining == "A"

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_unitary(self, grid128, rng, backend):
        psi = two_axis_state(grid128, rng)
        out = switch_frame(psi, FrameSwitch(FRAME_A, FRAME_C, backend=backend))
        assert abs(out.norm() - psi.norm()) <= 1e-10
        assert out.frame == FRAME_C
        assert out.labels == ("A", "B")

    def test_backends_agree(self, grid128, rng):
        for _ in range(10):
            psi = two_axis_state(grid128, rng)
            results = [
                switch_frame(psi, FrameSwitch(FRAME_A, FRAME_C, backend=b)) for b in BACKENDS
            ]
            assert fidelity(*results) >= 1.0 - 1e-8

    def test_all_ordered_pairs(self, grid64, rng):
        frames = (FRAME_A, FRAME_B, FRAME_C)
        for start in frames:
            for target in frames:
                if start == target:
                    continue
                psi = two_axis_state(grid64, rng, frame=start)
                results = [
                    switch_frame(psi, FrameSwitch(start, target, backend=b))
                    for b in BACKENDS
                ]
                assert fidelity(*results) >= 1.0 - 1e-8
                assert results[0].labels == reduced_labels(target)

    def test_round_trip(self, grid128, rng):
        psi = two_axis_state(grid128, rng)
        sw = FrameSwitch(FRAME_A, FRAME_C)
        back = switch_frame(switch_frame(psi, sw), sw.reversed())
        assert fidelity(back, psi) >= 1.0 - 1e-8

    def test_frame_tag_enforced(self, grid128, rng):
        psi = two_axis_state(grid128, rng, frame=FRAME_A)
        with pytest.raises(FrameMismatch):
            switch_frame(psi, FrameSwitch(FRAME_C, FRAME_A))

    def test_matches_gauge_invariant_reexpression(self, grid128, rng):
        # the switch equals re-expressing the underlying physical state
        psi = two_axis_state(grid128, rng)
        switched = switch_frame(psi, FrameSwitch(FRAME_A, FRAME_C))
        via_physical = reexpress(physical_state(psi, FRAME_A), FRAME_C)
        assert fidelity(switched, via_physical.canonical) >= 1.0 - 1e-8

    def test_representation_tags_preserved(self, grid64, rng):
        psi = to_representation(two_axis_state(grid64, rng), MOMENTUM)
        for backend in BACKENDS:
            out = switch_frame(psi, FrameSwitch(FRAME_A, FRAME_C, backend=backend))
            assert out.representation == (MOMENTUM, MOMENTUM)


class TestObservableDictionary:
    def test_dictionary_lines(self):
        sw = FrameSwitch(FRAME_A, FRAME_C)
        q_a, q_b = Observable.position("A"), Observable.position("B")
        p_a, p_b = Observable.momentum("A"), Observable.momentum("B")
        assert conjugate_observable(Observable.position("B"), sw) == q_b - q_a
        assert conjugate_observable(Observable.position("C"), sw) == -1 * q_a
        assert conjugate_observable(Observable.momentum("B"), sw) == p_b
        assert conjugate_observable(Observable.momentum("C"), sw) == -1 * p_b - p_a

    def test_expectation_invariance(self, grid128, rng):
        sw = FrameSwitch(FRAME_A, FRAME_C)
        observables = [
            Observable.position("B"),
            Observable.position("C"),
            Observable.momentum("B"),
            Observable.momentum("C"),
            Observable.position("B") * Observable.momentum("B"),
        ]
        for _ in range(5):
            psi = two_axis_state(grid128, rng)
            switched = switch_frame(psi, sw)
            for obs in observables:
                before = obs.expectation(psi)
                after = conjugate_observable(obs, sw).expectation(switched)
                assert abs(before - after) <= 1e-8

    def test_matches_classical_coordinate_map(self, rng):
        # the operator dictionary is the classical switch read backwards:
        # substituting the dictionary into old coordinates reproduces the
        # coordinates of the switched classical point
        sw = FrameSwitch(FRAME_A, FRAME_C)
        mapping = switch_dictionary(sw)
        rp = ReducedPhasePoint(FRAME_A, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2))
        out = classical_frame_switch(rp, FRAME_C)
        values = {
            ("A", "q"): out.q_rel[0],
            ("A", "p"): out.p_rel[0],
            ("B", "q"): out.q_rel[1],
            ("B", "p"): out.p_rel[1],
        }

        def evaluate(obs):
            total = 0.0
            for mono, coeff in obs.terms.items():
                term = coeff
                for key, power in mono:
                    term *= values[key] ** power
                total += term
            return total

        old = {
            ("B", "q"): rp.q_rel[0],
            ("B", "p"): rp.p_rel[0],
            ("C", "q"): rp.q_rel[1],
            ("C", "p"): rp.p_rel[1],
        }
        for key, image in mapping.items():
            assert evaluate(image) == pytest.approx(old[key], abs=1e-12)

    def test_rejects_foreign_axes(self):
        sw = FrameSwitch(FRAME_A, FRAME_C)
        with pytest.raises(UnsupportedObservable):
            conjugate_observable(Observable.position("A"), sw)


class TestDynamicsCommutation:
    def test_no_evolution_is_exact(self, grid64, rng):
        params = OscillatorParams()
        psi = random_wavefunction([("A", grid64), ("B", grid64)], rng, frame=FRAME_C)
        report = dynamics_frame_commutation(psi, params, 0.0, sw=FrameSwitch(FRAME_C, FRAME_A))
        assert report.fidelity == pytest.approx(1.0, abs=1e-14)

    def test_short_evolution(self, grid128):
        params = OscillatorParams()
        psi = product_state(
            ho_eigenstate(grid128, "A", 0), ho_eigenstate(grid128, "B", 0), frame=FRAME_C
        )
        report = dynamics_frame_commutation(
            psi, params, 0.25, dt=1e-3, sw=FrameSwitch(FRAME_C, FRAME_A)
        )
        assert report.fidelity >= 1.0 - 1e-6
        assert abs(report.evolve_first_norm - 1.0) <= 1e-10

    def test_switched_eigenstate_keeps_energy(self, grid128):
        params = OscillatorParams()
        psi = product_state(
            ho_eigenstate(grid128, "A", 0), ho_eigenstate(grid128, "B", 0), frame=FRAME_C
        )
        sw = FrameSwitch(FRAME_C, FRAME_A)
        h_c = reduced_quantum_hamiltonian(
            FRAME_C, params.potential(), params.system(), psi.subsystems
        )
        energy = h_c.expectation(psi)
        switched = switch_frame(psi, sw)
        h_a = reduced_quantum_hamiltonian(
            FRAME_A, params.potential(), params.system(), switched.subsystems
        )
        expected = 0.5 * (params.omega_a + params.omega_b)
        assert abs(h_a.expectation(switched) - energy) / energy <= 1e-10
        assert abs(energy - expected) / expected <= 1e-6


class TestEntanglementGeneration:
    def test_product_ground_state_entangles(self, grid128):
        psi = product_state(
            ho_eigenstate(grid128, "A", 0), ho_eigenstate(grid128, "B", 0), frame=FRAME_C
        )
        assert entanglement_entropy(psi, "A") <= 1e-10
        switched = switch_frame(psi, FrameSwitch(FRAME_C, FRAME_A))
        entropy = entanglement_entropy(switched, "B")
        assert entropy > 0.1
        assert entropy == pytest.approx(SWITCHED_GROUND_ENTROPY, abs=1e-6)
