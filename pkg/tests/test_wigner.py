import numpy as np
import pytest
from numpy.testing import assert_allclose

from qrf.classical import FRAME_A, FRAME_C
from qrf.errors import InvalidDensityMatrix
from qrf.grids import (
    MOMENTUM,
    Grid1D,
    gaussian_state,
    ho_eigenstate,
    product_state,
    to_representation,
)
from qrf.switching import FrameSwitch, switch_frame
from qrf.wigner import (
    DensityMatrix,
    WignerGrid,
    closed_form_eigenstate_wigner,
    density_matrix_from_pure,
    eigenstate_wigner_values,
    entanglement_entropy,
    marginal_wigner,
    negativity_volume,
    partial_trace,
    transformed_joint_wigner,
    wigner_of_state,
    wigner_transform,
)

# negativity of the first excited eigenstate's Wigner function; quadrature
# value, cross-checked against the closed contour integral 2 exp(-1/2) - 1
F1_NEGATIVITY = 0.2130613194

# entropy of the frame-switched equal-width product ground state (nats)
SWITCHED_GROUND_ENTROPY = 0.5533032997


def switched_product(grid, level_a, level_b, alpha_a=1.0, alpha_b=1.0):
    psi = product_state(
        ho_eigenstate(grid, "A", level_a, alpha=alpha_a),
        ho_eigenstate(grid, "B", level_b, alpha=alpha_b),
        frame=FRAME_C,
    )
    return switch_frame(psi, FrameSwitch(FRAME_C, FRAME_A))


class TestClosedForms:
    def test_origin_values(self):
        assert abs(eigenstate_wigner_values(0, 1.0, 0.0, 0.0) - 1 / np.pi) <= 1e-9
        assert abs(eigenstate_wigner_values(1, 1.3, 0.0, 0.0) + 1 / np.pi) <= 1e-9

    def test_excited_zero_contour(self):
        alpha = 0.7
        x = np.linspace(-0.5, 0.5, 11)
        xi_sq = (1.0 - 2 * alpha * x**2) * alpha / 2.0
        xi = np.sqrt(xi_sq)
        values = eigenstate_wigner_values(1, alpha, x, xi)
        assert np.max(np.abs(values)) <= 1e-12

    def test_sampled_grid_normalization(self):
        for level in (0, 1):
            grid = closed_form_eigenstate_wigner(level, 1.0)
            assert abs(grid.integral() - 1.0) <= 1e-6

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            eigenstate_wigner_values(2, 1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            eigenstate_wigner_values(0, -1.0, 0.0, 0.0)


class TestWignerTransform:
    @pytest.mark.parametrize("level", [0, 1])
    def test_matches_closed_form(self, grid128, level):
        psi = ho_eigenstate(grid128, "B", level, alpha=1.0)
        w = wigner_of_state(psi)
        x, xi = np.meshgrid(w.x, w.xi, indexing="ij")
        reference = eigenstate_wigner_values(level, 1.0, x, xi)
        assert np.max(np.abs(w.values - reference)) <= 1e-6

    def test_marginals_match_densities(self, grid128):
        psi = ho_eigenstate(grid128, "B", 1, alpha=1.4)
        w = wigner_of_state(psi)
        position_density = np.abs(psi.amplitudes) ** 2
        assert np.max(np.abs(w.position_marginal()[::2] - position_density)) <= 1e-6
        momentum_density = np.abs(to_representation(psi, MOMENTUM).amplitudes) ** 2
        assert np.max(np.abs(w.momentum_marginal()[::2] - momentum_density)) <= 1e-6

    def test_purity_identity(self, grid128):
        psi = gaussian_state(grid128, "B", alpha=0.8, center=0.4)
        rho = density_matrix_from_pure(psi)
        w = wigner_transform(rho)
        phase_space_purity = 2 * np.pi * np.sum(w.values**2) * w.dx * w.dxi
        assert abs(phase_space_purity - rho.purity()) <= 1e-4

    def test_bounded_by_inverse_pi(self, grid128):
        psi = ho_eigenstate(grid128, "B", 1, alpha=1.0)
        w = wigner_of_state(psi)
        assert np.max(np.abs(w.values)) <= 1 / np.pi + 1e-6

    def test_mixture_stays_below_pure_peak(self, grid128):
        left = gaussian_state(grid128, "B", alpha=1.0, center=-2.5)
        right = gaussian_state(grid128, "B", alpha=1.0, center=2.5)
        mixture = 0.5 * (
            density_matrix_from_pure(left).matrix + density_matrix_from_pure(right).matrix
        )
        w = wigner_transform(DensityMatrix(mixture, grid128))
        pure_peak = np.max(np.abs(wigner_of_state(left).values))
        assert np.max(np.abs(w.values)) < pure_peak
        assert abs(w.integral() - 1.0) <= 1e-6

    def test_normalization_gate(self, grid128):
        psi = gaussian_state(grid128, "B", alpha=1.1)
        w = wigner_of_state(psi)
        assert abs(w.integral() - 1.0) <= 1e-6


class TestDensityMatrix:
    def test_partial_trace_properties(self, grid64, rng):
        from qrf.grids import random_wavefunction

        psi = random_wavefunction([("B", grid64), ("C", grid64)], rng)
        rho = partial_trace(psi, "B")
        assert rho.grid == grid64
        assert rho.purity() <= 1.0 + 1e-10

    def test_rejects_non_hermitian(self, grid64):
        matrix = np.zeros((grid64.n, grid64.n), dtype=complex)
        matrix[0, 1] = 1.0
        matrix[0, 0] = 1.0
        with pytest.raises(InvalidDensityMatrix):
            DensityMatrix(matrix, grid64)

    def test_rejects_wrong_trace(self, grid64):
        with pytest.raises(InvalidDensityMatrix):
            DensityMatrix(2 * np.eye(grid64.n) / grid64.n, grid64)

    def test_rejects_negative_eigenvalues(self, grid64):
        matrix = np.eye(grid64.n, dtype=complex) / (grid64.n - 2)
        matrix[0, 0] = -1.0 / (grid64.n - 2)
        with pytest.raises(InvalidDensityMatrix):
            DensityMatrix(matrix, grid64)


class TestTransformedJoint:
    def test_normalized(self):
        joint = transformed_joint_wigner(0, 0, 0.5, 1.5)
        x = np.linspace(-10, 10, 81)
        xi = np.linspace(-8, 8, 81)
        marginal = marginal_wigner(joint, "B", x, xi)
        assert abs(marginal.integral() - 1.0) <= 1e-4

    def test_slice_factorizes(self):
        joint = transformed_joint_wigner(0, 1, 0.8, 1.2)
        q_b = np.linspace(-2, 2, 9)
        pi_b = np.linspace(-2, 2, 9)
        for qb in q_b:
            for pb in pi_b:
                slice_value = joint(qb, 0.0, pb, -pb)
                expected = eigenstate_wigner_values(0, 0.8, 0.0, 0.0) * eigenstate_wigner_values(
                    1, 1.2, qb, pb
                )
                assert slice_value == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_ground_ground_nonnegative(self):
        joint = transformed_joint_wigner(0, 0, 1.0, 1.0)
        values = joint(
            np.linspace(-3, 3, 11)[:, None, None, None],
            np.linspace(-3, 3, 11)[None, :, None, None],
            np.linspace(-3, 3, 11)[None, None, :, None],
            np.linspace(-3, 3, 11)[None, None, None, :],
        )
        assert np.min(values) >= 0.0


class TestMarginals:
    def test_oracle_triangle_ground_ground(self, grid128):
        # closed-form quadrature route vs switched-state partial-trace route
        # for the ground-ground study at width ratio 0.1 (scaled so both
        # factors decay inside the box); nodes restricted to the central
        # window where the marginals have support
        alpha_a, alpha_b = 0.4, 4.0
        switched = switched_product(grid128, 0, 0, alpha_a, alpha_b)
        for keep in ("B", "C"):
            transformed = wigner_transform(partial_trace(switched, keep))
            joint = transformed_joint_wigner(0, 0, alpha_a, alpha_b)
            keep_x = np.abs(transformed.x) <= 8.0
            keep_xi = np.abs(transformed.xi) <= 6.0
            x = transformed.x[keep_x][::4]
            xi = transformed.xi[keep_xi][::4]
            quadrature = marginal_wigner(joint, keep, x, xi)
            window = transformed.values[keep_x][:, keep_xi][::4, ::4]
            assert np.max(np.abs(quadrature.values - window)) <= 1e-3

    def test_excited_marginal_negativity_reduced(self, grid128):
        # one oscillator excited, equal widths: the frame switch mixes the
        # marginals and washes out most of the negativity
        for level_a, level_b, keep in ((0, 1, "B"), (1, 0, "C")):
            switched = switched_product(grid128, level_a, level_b)
            marginal = wigner_transform(partial_trace(switched, keep))
            negativity = negativity_volume(marginal)
            assert 0.0 < negativity < F1_NEGATIVITY

    def test_marginal_normalization(self):
        joint = transformed_joint_wigner(1, 0, 1.0, 1.0)
        x = np.linspace(-8, 8, 101)
        xi = np.linspace(-8, 8, 101)
        for keep in ("B", "C"):
            assert abs(marginal_wigner(joint, keep, x, xi).integral() - 1.0) <= 1e-4


class TestNegativity:
    def test_ground_state_has_none(self):
        grid = closed_form_eigenstate_wigner(0, 1.0)
        assert negativity_volume(grid) == 0.0

    def test_excited_state_regression_value(self):
        x = np.linspace(-6, 6, 801)
        grid = closed_form_eigenstate_wigner(1, 1.0, x, x)
        assert abs(negativity_volume(grid) - F1_NEGATIVITY) <= 1e-4

    def test_refinement_stable(self):
        coarse = closed_form_eigenstate_wigner(1, 1.0, np.linspace(-6, 6, 401), np.linspace(-6, 6, 401))
        fine = closed_form_eigenstate_wigner(1, 1.0, np.linspace(-6, 6, 801), np.linspace(-6, 6, 801))
        assert abs(negativity_volume(coarse) - negativity_volume(fine)) <= 1e-4


class TestEntanglementEntropy:
    def test_product_state_is_unentangled(self, grid128):
        psi = product_state(
            ho_eigenstate(grid128, "B", 0), ho_eigenstate(grid128, "C", 1), frame=FRAME_A
        )
        assert abs(entanglement_entropy(psi, "B")) <= 1e-10

    def test_switched_state_regression_value(self, grid128):
        switched = switched_product(grid128, 0, 0)
        assert entanglement_entropy(switched, "B") == pytest.approx(
            SWITCHED_GROUND_ENTROPY, abs=1e-6
        )

    def test_cut_symmetry(self, grid128):
        switched = switched_product(grid128, 0, 0, alpha_a=0.5)
        assert entanglement_entropy(switched, "B") == pytest.approx(
            entanglement_entropy(switched, "C"), abs=1e-10
        )

    def test_broader_frame_state_entangles_more(self):
        # scanned direction: lowering alpha_A/alpha_B (broader frame-particle
        # wavefunction) increases the switched-state entanglement
        grid = Grid1D(256, 40.0)
        narrow = entanglement_entropy(switched_product(grid, 0, 0, 1.0, 1.0), "B")
        broad = entanglement_entropy(switched_product(grid, 0, 0, 0.1, 10.0), "B")
        broadest = entanglement_entropy(switched_product(grid, 0, 0, 0.1 * 0.1, 10.0), "B")
        assert broad > narrow
        assert broadest > broad


class TestWignerGridType:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            WignerGrid(np.linspace(0, 1, 4), np.linspace(0, 1, 5), np.zeros((4, 4)))

    def test_value_lookup(self):
        grid = closed_form_eigenstate_wigner(0, 1.0)
        assert grid.value_at(0.0, 0.0) == pytest.approx(1 / np.pi, abs=1e-9)
