"""
CSV export of thresholds and q-sweeps
Floats use CSV_FLOAT_FORMAT with '.' decimals; infinite q is written as 'inf', a missing p_min as 'none'
"""

from dataclasses import asdict
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.entanglement_config import CSV_FLOAT_FORMAT, CSV_MISSING
from utils.common import setup_logging
from .threshold_scanner import ThetaSweep, ThresholdResult

logger = setup_logging(__name__)


def _p_value(result: ThresholdResult) -> float:
    return np.nan if result.p_min is None else result.p_min


def sweep_frame(results: Sequence[ThresholdResult]) -> pd.DataFrame:
    """Long format: q, p_min"""
    return pd.DataFrame({
        'q': [r.q for r in results],
        'p_min': [_p_value(r) for r in results],
    })


def table_frame(results: Sequence[ThresholdResult]) -> pd.DataFrame:
    """family, indicator, p_min"""
    return pd.DataFrame({
        'family': [r.family_id for r in results],
        'indicator': [r.indicator for r in results],
        'p_min': [_p_value(r) for r in results],
    })


def wide_sweep_frame(sweeps: Dict[str, Sequence[ThresholdResult]]) -> pd.DataFrame:
    """q, then one p_min column per family; all sweeps share the same q grid"""
    family_ids = list(sweeps)
    if not family_ids:
        return pd.DataFrame({'q': []})
    first = sweeps[family_ids[0]]
    df = pd.DataFrame({'q': [r.q for r in first]})
    for family_id in family_ids:
        column = sweeps[family_id]
        if [r.q for r in column] != list(df['q']):
            raise ValueError(f"sweep of {family_id} uses a different q grid")
        df[family_id] = [_p_value(r) for r in column]
    return df


def theta_frame(sweep: ThetaSweep) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in sweep.rows],
                        columns=['theta', 'd_vn', 'd_l', 'r_inf', 'r_2', 'concurrence',
                                 'entangled', 'detected'])


def to_csv_text(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, na_rep=CSV_MISSING,
                     lineterminator='\n')


def write_csv(df: pd.DataFrame, out: Optional[Union[str, Path]] = None) -> str:
    """
    Render df as CSV, writing it to `out` when given

    Returns:
        The CSV text
    """
    text = to_csv_text(df)
    if out is not None:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        logger.info("csv_written", path=str(path), rows=len(df))
    return text
