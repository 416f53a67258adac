import math

import numpy as np
import pytest

from app.core.errors import GapClosed, NonConvergent
from app.walk.topology import (
    gap_at,
    on_transition_line,
    phase_diagram,
    transition_distance,
    winding_number,
)

PI = math.pi


def test_gap_closes_at_zero_on_anti_diagonal():
    gaps = gap_at(PI / 4, -PI / 4)
    assert gaps.gap_zero == pytest.approx(0.0, abs=1e-7)
    assert not gaps.is_open()


def test_gap_closes_at_pi_on_diagonal():
    assert gap_at(PI / 4, PI / 4).gap_pi == pytest.approx(0.0, abs=1e-7)


def test_open_gaps():
    gaps = gap_at(PI / 4, PI / 3)
    assert gaps.gap_zero > 0.1
    assert gaps.gap_pi > 0.1
    assert gaps.is_open()


def test_gap_matches_fine_grid_minimum():
    alpha, beta = 0.9, -0.35
    ks = np.linspace(-PI, PI, 20001)
    eps = np.arccos(np.clip(-math.sin(alpha) * math.sin(beta)
                            + np.cos(ks) * math.cos(alpha) * math.cos(beta), -1, 1))
    gaps = gap_at(alpha, beta)
    assert gaps.gap_zero == pytest.approx(eps.min(), abs=1e-6)
    assert gaps.gap_pi == pytest.approx(PI - eps.max(), abs=1e-6)


@pytest.mark.parametrize("alpha,beta,distance", [
    (PI / 4, -PI / 4, 0.0),
    (PI / 4 + 0.1, PI / 4, 0.1),
    (0.0, 0.0, 0.0),
    (PI / 2, PI / 4, PI / 4),
])
def test_transition_distance(alpha, beta, distance):
    assert transition_distance(alpha, beta) == pytest.approx(distance, abs=1e-12)


def test_on_transition_line_margin():
    assert on_transition_line(PI / 4 + 0.01, PI / 4)
    assert not on_transition_line(PI / 4 + 0.1, PI / 4)


def test_winding_refuses_closed_gap():
    with pytest.raises(GapClosed):
        winding_number(PI / 4, -PI / 4)


def test_winding_is_integral_and_resolution_independent():
    coarse = winding_number(PI / 2 - 0.3, PI / 4, num_k=1024)
    fine = winding_number(PI / 2 - 0.3, PI / 4, num_k=2048)
    assert coarse.residual < 1e-3
    assert coarse.value == fine.value
    assert abs(coarse.value) in (0, 1)
    assert coarse.num_k_used == 1024


def test_winding_is_zero_for_flat_bloch_vector():
    # cos β = 0 makes n(k) constant
    assert winding_number(0.4, PI / 2).value == 0


def test_winding_nonconvergent_when_residual_bound_is_strict():
    with pytest.raises(NonConvergent, match="not integral"):
        winding_number(0.9, -0.35, num_k=16, residual_max=1e-9)


def test_winding_constant_between_transitions():
    beta = PI / 4
    alphas = np.linspace(-PI / 4 + 0.06, PI / 4 - 0.06, 15)
    values = {winding_number(a, beta).value for a in alphas}
    assert len(values) == 1


def test_phase_diagram_small_grid():
    alphas = np.linspace(-PI, PI, 8, endpoint=False) + PI / 24
    betas = np.linspace(-PI, PI, 6, endpoint=False)
    diagram = phase_diagram(alphas, betas, num_k=512, max_workers=2)
    assert len(diagram.cells) == 6
    assert all(len(row) == 8 for row in diagram.cells)
    values = diagram.winding_values()
    assert values.shape == (6, 8)
    finite = values[~np.isnan(values)]
    assert set(np.abs(finite).astype(int)) <= {0, 1}
    assert diagram.cells[2][3].alpha == pytest.approx(alphas[3])
    assert diagram.cells[2][3].beta == pytest.approx(betas[2])


def test_phase_diagram_marks_boundaries():
    alphas = np.array([-PI / 4, 0.3])
    betas = np.array([PI / 4])
    diagram = phase_diagram(alphas, betas, num_k=256)
    np.testing.assert_array_equal(diagram.boundary_mask(), [[True, False]])
    assert np.isnan(diagram.winding_values()[0, 0])


def test_phase_diagram_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        phase_diagram([0.1, 0.3, 0.2], [0.5])


@pytest.mark.slow
def test_winding_grid_integral_and_stable():
    grid = np.linspace(-PI, PI, 64, endpoint=False)
    counts = {-1: 0, 0: 0, 1: 0}
    for beta in grid:
        for alpha in grid:
            if transition_distance(alpha, beta) < 0.05:
                continue
            coarse = winding_number(alpha, beta, num_k=1024)
            fine = winding_number(alpha, beta, num_k=2048)
            assert coarse.residual < 0.01
            assert abs(coarse.value) in (0, 1)
            assert coarse.value == fine.value
            counts[coarse.value] += 1
    assert sum(counts.values()) > 1000
    # nontrivial cells come in both orientations, one per sign
    assert counts[1] == counts[-1] > 0
    assert counts[0] > 0


@pytest.mark.slow
def test_diagram_invariant_under_alpha_period():
    alphas = np.linspace(-PI, PI, 16, endpoint=False) + PI / 32
    betas = np.linspace(-PI, PI, 8, endpoint=False)
    base = phase_diagram(alphas, betas)
    shifted = phase_diagram(alphas + 2 * PI, betas)
    np.testing.assert_array_equal(base.boundary_mask(), shifted.boundary_mask())
    np.testing.assert_array_equal(np.nan_to_num(base.winding_values(), nan=9),
                                  np.nan_to_num(shifted.winding_values(), nan=9))


def test_quadrature_converges_away_from_transitions(rng):
    for _ in range(20):
        alpha, beta = rng.uniform(-PI, PI, size=2)
        if transition_distance(alpha, beta) < 0.1:
            continue
        coarse = winding_number(alpha, beta, num_k=1024)
        fine = winding_number(alpha, beta, num_k=2048)
        assert abs(coarse.raw_integral - fine.raw_integral) < 1e-4


def test_phase_diagram_margin_marks_near_line_cells():
    alphas = np.array([PI / 4 + 5e-4, 0.3])
    diagram = phase_diagram(alphas, [PI / 4], boundary_margin=0.05)
    np.testing.assert_array_equal(diagram.boundary_mask(), [[True, False]])
    assert diagram.cells[0][0].gaps.is_open()
