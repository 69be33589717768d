#!/usr/bin/env python3
"""
Tests for the detection threshold scanner, q-sweeps and the N-fermion threshold
"""

import math
import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(__file__))

from indicators.closed_forms import KNOWN_ROOTS, TABLE_VALUES
from scanners.families import (
    FAMILIES, MIXED_FAMILIES, StateFamily, general_werner_family, get_family
)
from scanners.threshold_scanner import (
    Indicator, SpectralGrid, ThetaSweep, build_q_grid, find_threshold, nfermion_threshold_closed_form,
    nfermion_threshold_fraction, nfermion_threshold_numeric, q_sweep, table_rows,
    theta_detection_sweep
)
from states.fermion_states import werner_state
from utils.error_handler import (
    DimensionTooLarge, InvalidDimensions, InvalidOrder, NonMonotoneWarning, ParameterOutOfRange,
    UnknownFamily, WrongDimension
)

COARSE = 0.01


def test_family_registry():
    assert set(MIXED_FAMILIES) | {'theta'} == set(FAMILIES)
    assert get_family('theta').interval == (0.0, math.pi)
    assert get_family('werner').has_concurrence
    assert not get_family('dim6-2').has_concurrence
    with pytest.raises(UnknownFamily):
        get_family('bell')


def test_indicator_labels():
    assert Indicator.parse('R_INF').label == 'r_inf'
    assert Indicator.parse('r_2').order.value == 2.0
    assert Indicator.renyi(1.5).label == 'r_1.5'
    assert Indicator.parse('concurrence').kind == 'concurrence'
    with pytest.raises(InvalidOrder):
        Indicator.parse('negativity')
    with pytest.raises(InvalidOrder):
        Indicator.parse('r_0.5')


@pytest.mark.parametrize("family_id, label", sorted(KNOWN_ROOTS))
def test_thresholds_match_exact_roots(family_id, label):
    result = find_threshold(get_family(family_id), label, grid_step=COARSE)
    assert result.detected
    assert not result.non_monotone
    assert result.bracket_width <= 1e-9
    tol = 1e-6 if label == 'concurrence' else 1e-8
    assert result.p_min == pytest.approx(KNOWN_ROOTS[(family_id, label)], abs=tol)


@pytest.mark.parametrize("family_id", sorted(TABLE_VALUES))
def test_table_rows_reproduce_reference_tables(family_id):
    family = get_family(family_id)
    rows = {row.indicator: row for row in table_rows(family, grid_step=COARSE)}
    for label, expected in TABLE_VALUES[family_id].items():
        assert rows[label].p_min == pytest.approx(expected, abs=2e-3)
    assert ('concurrence' in rows) == family.has_concurrence
    # weaker indicators need more mixing weight before they fire
    assert rows['d_l'].p_min >= rows['d_vn'].p_min >= rows['r_2'].p_min >= rows['r_inf'].p_min


@pytest.mark.parametrize("family_id", MIXED_FAMILIES)
def test_q_sweep_is_non_increasing_and_hits_table_values(family_id):
    family = get_family(family_id)
    grid = SpectralGrid.build(family, COARSE, with_concurrence=False)
    orders = build_q_grid(1, 50, 99, True)
    results = q_sweep(family, orders, grid=grid, workers=4)
    p_mins = [r.p_min for r in results]
    assert [r.q for r in results] == [order.value for order in orders]
    assert all(a >= b - 1e-6 for a, b in zip(p_mins, p_mins[1:]))

    by_order = {r.q: r.p_min for r in results}
    reference = TABLE_VALUES[family_id]
    assert by_order[1.0] == pytest.approx(reference['d_vn'], abs=2e-3)
    assert by_order[2.0] == pytest.approx(reference['r_2'], abs=2e-3)
    assert by_order[math.inf] == pytest.approx(reference['r_inf'], abs=2e-3)


def test_q_sweep_results_follow_input_order_across_workers():
    family = get_family('werner')
    grid = SpectralGrid.build(family, COARSE, with_concurrence=False)
    serial = q_sweep(family, build_q_grid(1, 10, 10, True), grid=grid, workers=1)
    parallel = q_sweep(family, build_q_grid(1, 10, 10, True), grid=grid, workers=4)
    assert [r.p_min for r in serial] == [r.p_min for r in parallel]


def test_q_sweep_rejects_unsorted_grid():
    with pytest.raises(ParameterOutOfRange):
        q_sweep(get_family('werner'), [2, 1])


def test_build_q_grid():
    grid = build_q_grid()
    assert len(grid) == 100
    assert grid[0].value == 1.0 and grid[-2].value == pytest.approx(50.0)
    assert grid[1].value == pytest.approx(1.5)
    assert grid[-1].is_infinite
    assert [o.value for o in build_q_grid(3, 3, 1, False)] == [3.0]
    with pytest.raises(InvalidOrder):
        build_q_grid(0.5, 2, 3)
    with pytest.raises(ParameterOutOfRange):
        build_q_grid(5, 2, 3)


def test_grid_step_range():
    with pytest.raises(ParameterOutOfRange):
        SpectralGrid.build(get_family('werner'), 0.6)
    with pytest.raises(ParameterOutOfRange):
        SpectralGrid.build(get_family('werner'), 0.0)


def test_concurrence_needs_a_concurrence_grid():
    grid = SpectralGrid.build(get_family('dim6-1'), 0.1)
    with pytest.raises(WrongDimension):
        grid.values(Indicator.parse('concurrence'))


def test_never_detected_family():
    weak = StateFamily('weak-werner', 4, 2, lambda p: werner_state(0.3 * p))
    result = find_threshold(weak, 'r_inf', grid_step=COARSE)
    assert result.p_min is None
    assert not result.detected


def test_detected_from_the_start():
    strong = StateFamily('strong-werner', 4, 2, lambda p: werner_state(0.5 + 0.5 * p))
    result = find_threshold(strong, 'r_inf', grid_step=COARSE)
    assert result.p_min == 0.0
    assert result.bracket_width == 0.0
    assert not result.non_monotone


def test_non_monotone_region_reports_last_crossing():
    folded = StateFamily('folded-werner', 4, 2, lambda p: werner_state(abs(2 * p - 1)))
    with pytest.warns(NonMonotoneWarning):
        result = find_threshold(folded, 'r_inf', grid_step=COARSE)
    assert result.non_monotone
    assert result.p_min == pytest.approx(0.7, abs=1e-6)


def test_r_q_label_requires_order():
    result = find_threshold(get_family('werner'), 'r_q', q=2, grid_step=COARSE)
    assert result.indicator == 'r_2'
    assert result.q == 2.0
    assert result.p_min == pytest.approx(math.sqrt(0.4), abs=1e-8)


def test_theta_states_are_always_detected():
    sweep = theta_detection_sweep(50)
    assert isinstance(sweep, ThetaSweep)
    assert len(sweep.rows) == 50
    assert sweep.entangled_count == 48
    assert sweep.all_entangled_detected
    assert not sweep.rows[0].entangled and not sweep.rows[-1].entangled
    for row in sweep.rows[1:-1]:
        assert row.concurrence > 1e-9
    with pytest.raises(ParameterOutOfRange):
        theta_detection_sweep(1)


class TestNFermionThreshold:
    @pytest.mark.parametrize("N, n, expected", [
        (2, 4, Fraction(2, 5)),
        (2, 6, Fraction(2, 7)),
        (3, 6, Fraction(9, 19)),
        (2, 10, Fraction(2, 11)),
    ])
    def test_exact_fractions(self, N, n, expected):
        assert nfermion_threshold_fraction(N, n) == expected
        assert nfermion_threshold_closed_form(N, n) == pytest.approx(float(expected))

    def test_closed_form_decreases_with_n(self):
        values = [nfermion_threshold_closed_form(2, n) for n in (4, 6, 8, 10)]
        assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("N, n", [(2, 5), (2, 2), (1, 4), (2, 22)])
    def test_closed_form_rejects_bad_dimensions(self, N, n):
        with pytest.raises(InvalidDimensions):
            nfermion_threshold_fraction(N, n)

    @pytest.mark.parametrize("N, k", [(2, 2), (2, 3), (3, 2)])
    def test_numeric_matches_closed_form(self, N, k):
        numeric = nfermion_threshold_numeric(N, k, grid_step=COARSE)
        assert numeric == pytest.approx(nfermion_threshold_closed_form(N, k * N), abs=1e-6)

    def test_numeric_runs_beyond_dense_limit(self):
        # n**N = 4096 and 1156: scanned from spectra, no dense matrix
        assert nfermion_threshold_numeric(4, 2, grid_step=COARSE) == pytest.approx(34 / 69, abs=1e-6)
        assert nfermion_threshold_closed_form(4, 8) == pytest.approx(34 / 69)
        assert nfermion_threshold_numeric(2, 17, grid_step=COARSE) == pytest.approx(2 / 35, abs=1e-6)

    def test_numeric_guards_dimension(self):
        with pytest.raises(DimensionTooLarge):
            nfermion_threshold_numeric(5, 4)
        with pytest.raises(InvalidDimensions):
            nfermion_threshold_numeric(2, 1)

    def test_general_family_shape(self):
        family = general_werner_family(3, 2)
        assert (family.n, family.N) == (6, 3)
        assert not family.has_concurrence
        rho = family(0.5)
        assert rho.sector_dimension == 20
