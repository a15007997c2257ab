import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qrf.classical import (
    FRAME_A,
    FRAME_B,
    FRAME_C,
    FREE_POTENTIAL,
    ExtendedPhasePoint,
    FrameLabel,
    ParticleSystem,
    Potential,
    ReducedPhasePoint,
    classical_frame_switch,
    dirac_bracket,
    embed_reduced,
    gauge_flow,
    lagrangian_momenta,
    momentum_coordinate,
    poisson_bracket,
    position_coordinate,
    project_reduced,
    spring_potential,
    total_momentum,
)
from qrf.errors import ConstraintViolation, SameFrame

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def on_surface_point(rng, n=3):
    q = rng.uniform(-1, 1, n)
    p = rng.uniform(-1, 1, n)
    p -= p.mean()
    return ExtendedPhasePoint(q, p)


class TestTotalMomentum:
    def test_zero_sum(self):
        assert total_momentum(ExtendedPhasePoint([0, 0, 0], [1, 2, -3])) == 0.0

    def test_plain_sum(self):
        assert total_momentum(ExtendedPhasePoint([0, 0, 0], [1, 1, 1])) == 3.0

    def test_gauge_flow_preserves_momentum(self, rng):
        point = on_surface_point(rng, n=5)
        flowed = gauge_flow(point, 1.7)
        assert total_momentum(flowed) == total_momentum(point)


class TestGaugeFlow:
    def test_translates_positions(self):
        flowed = gauge_flow(ExtendedPhasePoint([0, 0, 0], [1, -1, 0]), 2.0)
        assert_allclose(flowed.q, [2, 2, 2])
        assert_allclose(flowed.p, [1, -1, 0])

    @given(s1=finite, s2=finite)
    @settings(max_examples=50, deadline=None)
    def test_additivity(self, s1, s2):
        point = ExtendedPhasePoint([0.3, -1.2, 2.0], [0.1, 0.2, -0.3])
        twice = gauge_flow(gauge_flow(point, s1), s2)
        once = gauge_flow(point, s1 + s2)
        assert_allclose(twice.q, once.q, atol=1e-12)

    def test_zero_is_identity(self):
        point = ExtendedPhasePoint([0.3, -1.2, 2.0], [0.1, 0.2, -0.3])
        flowed = gauge_flow(point, 0.0)
        assert np.array_equal(flowed.q, point.q)

    def test_preserves_relative_distances(self, rng):
        point = on_surface_point(rng, n=4)
        flowed = gauge_flow(point, -3.21)
        diffs = point.q[:, None] - point.q[None, :]
        flowed_diffs = flowed.q[:, None] - flowed.q[None, :]
        assert_allclose(flowed_diffs, diffs, atol=1e-14, rtol=0)


class TestEmbedProject:
    def test_embedding_example(self):
        rp = ReducedPhasePoint(FRAME_A, [1, 3], [2, 4])
        ext = embed_reduced(rp)
        assert_allclose(ext.q, [0, 1, 3])
        assert_allclose(ext.p, [-6, 2, 4])

    def test_zero_maps_to_zero(self):
        ext = embed_reduced(ReducedPhasePoint(FRAME_B, [0, 0], [0, 0]))
        assert np.all(ext.q == 0) and np.all(ext.p == 0)

    @pytest.mark.parametrize("frame", [FRAME_A, FRAME_B, FRAME_C])
    def test_image_on_gauge_fixed_surface(self, frame, rng):
        rp = ReducedPhasePoint(frame, rng.uniform(-5, 5, 2), rng.uniform(-5, 5, 2))
        ext = embed_reduced(rp)
        assert total_momentum(ext) == 0.0
        assert ext.q[frame.index] == 0.0

    def test_project_inverts_embed(self, rng):
        rp = ReducedPhasePoint(FRAME_C, rng.uniform(-5, 5, 3), rng.uniform(-5, 5, 3))
        back = project_reduced(embed_reduced(rp), FRAME_C)
        assert np.array_equal(back.q_rel, rp.q_rel)
        assert np.array_equal(back.p_rel, rp.p_rel)

    def test_projection_example(self):
        point = ExtendedPhasePoint([0, 1, 3], [-6, 2, 4])
        rp = project_reduced(point, FRAME_A)
        assert_allclose(rp.q_rel, [1, 3])
        assert_allclose(rp.p_rel, [2, 4])

    def test_gauge_violation_rejected(self):
        point = ExtendedPhasePoint([0.5, 1, 3], [-6, 2, 4])
        with pytest.raises(ConstraintViolation):
            project_reduced(point, FRAME_A)

    def test_momentum_violation_rejected(self):
        point = ExtendedPhasePoint([0, 1, 3], [1, 2, 4])
        with pytest.raises(ConstraintViolation):
            project_reduced(point, FRAME_A)


class TestFrameSwitch:
    def test_switch_example_a_to_c(self):
        rp = ReducedPhasePoint(FRAME_A, [1, 3], [2, 4])
        out = classical_frame_switch(rp, FRAME_C)
        # (q'_A, p'_A, q'_B, p'_B) = (-q_C, -p_B - p_C, q_B - q_C, p_B)
        assert_allclose(out.q_rel, [-3, -2])
        assert_allclose(out.p_rel, [-6, 2])

    def test_zero_is_fixed_point(self):
        rp = ReducedPhasePoint(FRAME_A, [0, 0], [0, 0])
        out = classical_frame_switch(rp, FRAME_B)
        assert np.all(out.q_rel == 0) and np.all(out.p_rel == 0)

    def test_round_trip(self, rng):
        for _ in range(100):
            rp = ReducedPhasePoint(FRAME_A, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2))
            back = classical_frame_switch(classical_frame_switch(rp, FRAME_C), FRAME_A)
            assert_allclose(back.q_rel, rp.q_rel, atol=1e-15, rtol=0)
            assert_allclose(back.p_rel, rp.p_rel, atol=1e-15, rtol=0)

    def test_same_frame_rejected(self):
        rp = ReducedPhasePoint(FRAME_A, [1, 3], [2, 4])
        with pytest.raises(SameFrame):
            classical_frame_switch(rp, FRAME_A)

    def test_general_n(self, rng):
        # five particles: switching is just a relabelled translation
        rp = ReducedPhasePoint(FrameLabel(2), rng.uniform(-2, 2, 4), rng.uniform(-2, 2, 4))
        out = classical_frame_switch(rp, FrameLabel(4))
        ext_in = embed_reduced(rp)
        ext_out = embed_reduced(out)
        # relative distances and momenta are frame-independent observables
        for i in range(5):
            for j in range(5):
                assert_allclose(
                    ext_out.q[i] - ext_out.q[j], ext_in.q[i] - ext_in.q[j], atol=1e-12
                )
        assert_allclose(ext_out.p, ext_in.p, atol=1e-12)


class TestDiracBracket:
    def test_frame_coordinate_pair_vanishes(self, rng):
        for _ in range(20):
            point = on_surface_point(rng)
            value = dirac_bracket(
                position_coordinate(0), momentum_coordinate(0), point, FRAME_A
            )
            assert abs(value) <= 1e-6

    def test_surviving_pairs_are_canonical(self, rng):
        for _ in range(20):
            point = on_surface_point(rng)
            for i in (1, 2):
                for j in (1, 2):
                    value = dirac_bracket(
                        position_coordinate(i), momentum_coordinate(j), point, FRAME_A
                    )
                    assert abs(value - (1.0 if i == j else 0.0)) <= 1e-6

    def test_other_frame(self, rng):
        point = on_surface_point(rng)
        assert abs(dirac_bracket(position_coordinate(1), momentum_coordinate(1), point, FRAME_B)) <= 1e-6
        assert abs(dirac_bracket(position_coordinate(0), momentum_coordinate(0), point, FRAME_B) - 1) <= 1e-6

    def test_poisson_canonical_pairs(self, rng):
        point = on_surface_point(rng)
        assert abs(poisson_bracket(position_coordinate(1), momentum_coordinate(1), point) - 1) <= 1e-6
        assert abs(poisson_bracket(position_coordinate(1), momentum_coordinate(2), point)) <= 1e-6


class TestDiracObservables:
    def test_momenta_and_distances_flow_invariant(self, rng):
        point = on_surface_point(rng, n=4)
        for s in (-2.0, 0.7, 11.3):
            flowed = gauge_flow(point, s)
            assert np.array_equal(flowed.p, point.p)
            diffs = point.q[:, None] - point.q[None, :]
            flowed_diffs = flowed.q[:, None] - flowed.q[None, :]
            assert_allclose(flowed_diffs, diffs, atol=1e-14, rtol=0)


class TestLagrangianMomenta:
    def test_pure_center_of_mass_motion(self):
        assert_allclose(lagrangian_momenta([1.0, 1.0, 1.0]), [0, 0, 0], atol=1e-15)

    def test_single_particle_kick(self):
        assert_allclose(lagrangian_momenta([1.0, 0.0, 0.0]), [2 / 3, -1 / 3, -1 / 3])

    @given(st.lists(finite, min_size=2, max_size=8))
    @settings(max_examples=100, deadline=None)
    def test_image_on_constraint_surface(self, velocities):
        assert abs(np.sum(lagrangian_momenta(velocities))) <= 1e-12


class TestPotential:
    def test_spring_translation_invariance(self, rng):
        potential = spring_potential([(2, 0, 1.0), (2, 1, 2.5)])
        for _ in range(10):
            q = rng.uniform(-3, 3, 3)
            assert potential.translation_defect(q, rng.uniform(-5, 5)) <= 1e-10

    def test_spring_gradient_sums_to_zero(self, rng):
        potential = spring_potential([(2, 0, 1.0), (2, 1, 2.5)])
        grad = potential.gradient(rng.uniform(-3, 3, 3))
        assert abs(grad.sum()) <= 1e-12

    def test_finite_difference_gradient(self, rng):
        analytic = spring_potential([(1, 0, 1.3)])
        numeric = Potential(lambda q: 0.5 * 1.3 * (q[1] - q[0]) ** 2)
        q = rng.uniform(-2, 2, 2)
        assert_allclose(numeric.gradient(q), analytic.gradient(q), atol=1e-7)

    def test_free_potential(self):
        assert FREE_POTENTIAL([1.0, 2.0, 3.0]) == 0.0
        assert np.all(FREE_POTENTIAL.gradient(np.zeros(3)) == 0)


class TestTypes:
    def test_frame_label_names(self):
        assert FrameLabel(0).name == "A"
        assert FrameLabel.from_name("c") == FRAME_C
        with pytest.raises(ValueError):
            FrameLabel.from_name("AB")

    def test_particle_system_validation(self):
        with pytest.raises(ValueError):
            ParticleSystem(1)
        with pytest.raises(ValueError):
            ParticleSystem(3, masses=[1.0, -1.0, 1.0])
        with pytest.raises(ValueError):
            ParticleSystem(3, masses=[1.0, 1.0])

    def test_phase_point_validation(self):
        with pytest.raises(ValueError):
            ExtendedPhasePoint([1.0, 2.0], [1.0])
        with pytest.raises(ValueError):
            ExtendedPhasePoint([np.inf, 0.0], [0.0, 0.0])

    def test_reduced_point_labels(self):
        rp = ReducedPhasePoint(FRAME_B, [1.0, 2.0], [0.0, 0.0])
        assert rp.labels == (0, 2)
        assert rp.n == 3
