#!/usr/bin/env python3
"""
Tests for the CSV rendering of thresholds and q-sweeps
"""

import math
import os
import sys

import pytest

sys.path.append(os.path.dirname(__file__))

from scanners.csv_export import (
    sweep_frame, table_frame, theta_frame, to_csv_text, wide_sweep_frame, write_csv
)
from scanners.threshold_scanner import ThetaRow, ThetaSweep, ThresholdResult


def result(q, p_min, family_id='werner'):
    return ThresholdResult(family_id, 'r_q', p_min, 1e-9, q=q)


def test_table_csv_format():
    rows = [ThresholdResult('werner', 'r_inf', 0.4, 1e-9),
            ThresholdResult('werner', 'd_l', None, 0.0)]
    assert to_csv_text(table_frame(rows)) == (
        "family,indicator,p_min\n"
        "werner,r_inf,0.400000000\n"
        "werner,d_l,none\n")


def test_sweep_csv_writes_infinity_and_missing():
    text = to_csv_text(sweep_frame([result(1.0, 0.809), result(math.inf, None)]))
    assert text.splitlines() == ['q,p_min', '1.000000000,0.809000000', 'inf,none']


def test_wide_frame_shares_the_q_column():
    sweeps = {
        'werner': [result(2.0, 0.632), result(math.inf, 0.4)],
        'gisin': [result(2.0, 0.667, 'gisin'), result(math.inf, 0.5, 'gisin')],
    }
    lines = to_csv_text(wide_sweep_frame(sweeps)).splitlines()
    assert lines == ['q,werner,gisin', '2.000000000,0.632000000,0.667000000',
                     'inf,0.400000000,0.500000000']
    assert list(wide_sweep_frame({}).columns) == ['q']


def test_wide_frame_rejects_mismatched_grids():
    with pytest.raises(ValueError):
        wide_sweep_frame({'werner': [result(2.0, 0.6)], 'gisin': [result(3.0, 0.6, 'gisin')]})


def test_theta_frame_columns():
    row = ThetaRow(theta=0.5, d_vn=0.1, d_l=0.2, r_inf=0.3, r_2=0.25, concurrence=0.8,
                   entangled=True, detected=True)
    df = theta_frame(ThetaSweep((row,)))
    assert list(df.columns) == ['theta', 'd_vn', 'd_l', 'r_inf', 'r_2', 'concurrence',
                                'entangled', 'detected']
    assert to_csv_text(df).splitlines()[1].endswith('0.800000000,True,True')


def test_write_csv_creates_parent_directories(tmp_path):
    target = tmp_path / 'nested' / 'sweep.csv'
    text = write_csv(sweep_frame([result(1.5, 0.7)]), target)
    assert target.read_text(encoding='utf-8') == text
    assert write_csv(sweep_frame([result(1.5, 0.7)])) == text
