"""
Indicator Report
Aggregates every entropic indicator (and the concurrence when defined) of one state
into an immutable, JSON-serializable report
"""

import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, field_serializer

from config.entanglement_config import DEFAULT_Q_GRID, TOLERANCES
from numerics.entropy import EntropicOrder
from states.fermion_states import DensityMatrix
from utils.common import setup_logging
from utils.error_handler import error_handler_decorator, performance_monitor
from .concurrence import esbl_concurrence
from .entropic_criteria import SpectralPair

logger = setup_logging(__name__)


class Verdict(str, Enum):
    ENTANGLED = "entangled"
    NOT_DETECTED = "not_detected"
    INCONCLUSIVE = "inconclusive"
    SEPARABLE = "separable"


def verdict_of(value: float, tol: Optional[float] = None) -> Verdict:
    """Sign verdict of an entropic indicator; values within tol of 0 are inconclusive"""
    tol = TOLERANCES['verdict'] if tol is None else tol
    if value > tol:
        return Verdict.ENTANGLED
    if value < -tol:
        return Verdict.NOT_DETECTED
    return Verdict.INCONCLUSIVE


def concurrence_verdict(value: float, tol: Optional[float] = None) -> Verdict:
    tol = TOLERANCES['verdict'] if tol is None else tol
    return Verdict.ENTANGLED if value > tol else Verdict.SEPARABLE


class RenyiValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: float
    value: float

    @field_serializer('q')
    def serialize_q(self, q: float) -> Union[float, str]:
        return 'inf' if math.isinf(q) else q


class IndicatorReport(BaseModel):
    """Signed indicator values plus thresholded verdicts"""
    model_config = ConfigDict(frozen=True)

    n: int
    n_particles: int
    d_vn: float
    d_l: Optional[float] = None
    r_inf: float
    r_values: List[RenyiValue]
    concurrence: Optional[float] = None
    detected: Dict[str, bool]
    verdicts: Dict[str, Verdict]
    overall: Verdict

    def r_value(self, q: Union[EntropicOrder, float, str]) -> float:
        target = EntropicOrder.of(q).value
        for entry in self.r_values:
            if entry.q == target:
                return entry.value
        raise KeyError(f"q={target} not in report")


def _r_label(order: EntropicOrder) -> str:
    return f"r_{order.label}"


def _overall(verdicts: Dict[str, Verdict], concurrence: Optional[float]) -> Verdict:
    values = set(verdicts.values())
    if Verdict.ENTANGLED in values:
        return Verdict.ENTANGLED
    if concurrence is not None:
        return Verdict.SEPARABLE
    if Verdict.INCONCLUSIVE in values:
        return Verdict.INCONCLUSIVE
    return Verdict.NOT_DETECTED


@error_handler_decorator("indicator_report")
@performance_monitor("indicator_report")
def full_report(rho: DensityMatrix,
                q_grid: Sequence[Union[EntropicOrder, float, str]] = DEFAULT_Q_GRID,
                verdict_tol: Optional[float] = None) -> IndicatorReport:
    """
    Evaluate all indicators of rho

    Args:
        rho: Validated density matrix
        q_grid: Renyi orders for R_q (each >= 1)
        verdict_tol: Half-width of the inconclusive band around 0

    Returns:
        IndicatorReport; d_l only for N = 2, concurrence only for n = 4, N = 2
    """
    orders = [EntropicOrder.of(q) for q in q_grid]
    pair = SpectralPair.of(rho)

    values: Dict[str, float] = {'d_vn': pair.d_von_neumann(), 'r_inf': pair.r_infinity()}
    if rho.N == 2:
        values['d_l'] = pair.d_linear()
    r_values = []
    for order in orders:
        value = pair.r_q(order)
        r_values.append(RenyiValue(q=order.value, value=value))
        values[_r_label(order)] = value

    verdicts = {name: verdict_of(value, verdict_tol) for name, value in values.items()}
    detected = {name: value > 0 for name, value in values.items()}

    concurrence = None
    if rho.n == 4 and rho.N == 2:
        concurrence = esbl_concurrence(rho)
        verdicts['concurrence'] = concurrence_verdict(concurrence, verdict_tol)
        detected['concurrence'] = concurrence > 0

    report = IndicatorReport(
        n=rho.n,
        n_particles=rho.N,
        d_vn=values['d_vn'],
        d_l=values.get('d_l'),
        r_inf=values['r_inf'],
        r_values=r_values,
        concurrence=concurrence,
        detected=detected,
        verdicts=verdicts,
        overall=_overall(verdicts, concurrence),
    )
    logger.debug("report_built", n=rho.n, N=rho.N, overall=report.overall.value)
    return report
