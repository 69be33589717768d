"""
Detection Threshold Scanner
Locates p_min, the smallest family parameter at which an indicator turns positive,
by a coarse grid scan followed by bisection of the last upward sign change
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from config.entanglement_config import MAX_FACTORIAL_N, SCAN_DEFAULTS, TOLERANCES
from indicators.concurrence import esbl_concurrence
from indicators.entropic_criteria import SpectralPair
from indicators.report import verdict_of, Verdict
from numerics.entropy import EntropicOrder
from states.fermion_states import DensityMatrix, general_werner_vector, theta_state
from utils.common import setup_logging
from utils.error_handler import (
    ConvergenceFailure, InvalidDimensions, InvalidOrder, NonMonotoneWarning, ParameterOutOfRange,
    WrongDimension, error_handler_decorator, performance_monitor
)
from .families import StateFamily, general_werner_family

logger = setup_logging(__name__)

TABLE_INDICATORS = ('d_vn', 'd_l', 'r_inf', 'r_2')


@dataclass(frozen=True)
class Indicator:
    """An indicator selector: d_vn, d_l, r_q (with its order) or concurrence"""
    kind: str
    order: Optional[EntropicOrder] = None

    @classmethod
    def parse(cls, label: str) -> 'Indicator':
        label = label.strip().lower()
        if label in ('d_vn', 'd_l', 'concurrence'):
            return cls(label)
        if label.startswith('r_'):
            return cls.renyi(EntropicOrder.parse(label[2:]))
        raise InvalidOrder(f"unknown indicator {label!r}", indicator=label)

    @classmethod
    def renyi(cls, q: Union[EntropicOrder, float, str]) -> 'Indicator':
        return cls('r_q', EntropicOrder.of(q))

    @property
    def label(self) -> str:
        if self.kind == 'r_q':
            return f"r_{self.order.label}"
        return self.kind

    def from_pair(self, pair: SpectralPair) -> float:
        if self.kind == 'd_vn':
            return pair.d_von_neumann()
        if self.kind == 'd_l':
            return pair.d_linear()
        if self.kind == 'r_q':
            return pair.r_q(self.order)
        raise ValueError(f"{self.label} is not a spectral indicator")

    def evaluate(self, rho: DensityMatrix) -> float:
        if self.kind == 'concurrence':
            return esbl_concurrence(rho)
        return self.from_pair(SpectralPair.of(rho))

    def at(self, family: StateFamily, p: float) -> float:
        if self.kind == 'concurrence':
            return esbl_concurrence(family(p))
        return self.from_pair(family.pair(p))


@dataclass(frozen=True)
class ThresholdResult:
    """p_min of one (family, indicator); p_min None means never detected on the interval"""
    family_id: str
    indicator: str
    p_min: Optional[float]
    bracket_width: float
    non_monotone: bool = False
    q: Optional[float] = None

    @property
    def detected(self) -> bool:
        return self.p_min is not None


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """
    Spectra of rho(p) and rho_r(p) on the coarse parameter grid of one family

    Built once and shared read-only by concurrent threshold searches.
    """
    family_id: str
    params: np.ndarray
    pairs: Tuple[SpectralPair, ...]
    concurrences: Optional[np.ndarray] = None

    @classmethod
    def build(cls, family: StateFamily, step: Optional[float] = None,
              with_concurrence: Optional[bool] = None) -> 'SpectralGrid':
        step = SCAN_DEFAULTS['grid_step'] if step is None else float(step)
        if not (0.0 < step <= 0.5):
            raise ParameterOutOfRange(f"grid step {step} outside (0, 0.5]", grid_step=step)
        with_concurrence = family.has_concurrence if with_concurrence is None else with_concurrence

        lo, hi = family.interval
        count = int(round((hi - lo) / step)) + 1
        params = np.linspace(lo, hi, count)
        params.flags.writeable = False

        pairs, concurrences = [], []
        for p in params:
            if with_concurrence:
                rho = family(float(p))
                pairs.append(SpectralPair.of(rho))
                concurrences.append(esbl_concurrence(rho))
            else:
                pairs.append(family.pair(float(p)))

        conc = None
        if with_concurrence:
            conc = np.asarray(concurrences)
            conc.flags.writeable = False
        logger.info("spectral_grid_built", family=family.family_id, points=count,
                    with_concurrence=bool(with_concurrence))
        return cls(family.family_id, params, tuple(pairs), conc)

    def values(self, indicator: Indicator) -> np.ndarray:
        if indicator.kind == 'concurrence':
            if self.concurrences is None:
                raise WrongDimension(f"grid of {self.family_id} carries no concurrence",
                                     family=self.family_id)
            return self.concurrences
        return np.array([indicator.from_pair(pair) for pair in self.pairs])


def _locate_crossing(positive: np.ndarray) -> Tuple[Optional[int], bool]:
    """
    Index i of the last upward crossing (positive[i] false, positive[i+1] true)

    Returns (None, flag) when the indicator is already positive at the first grid point.
    The flag is set when the positive region is not a single upper interval.
    """
    ups = np.flatnonzero(~positive[:-1] & positive[1:])
    if ups.size == 0:
        return None, not bool(positive.all())
    idx = int(ups[-1])
    non_monotone = bool(positive[:idx + 1].any()) or not bool(positive[-1])
    return idx, non_monotone


def _bisect(family: StateFamily, indicator: Indicator, lo: float, hi: float,
            tol: float) -> Tuple[float, float]:
    """Shrink [lo, hi] with indicator(lo) <= 0 < indicator(hi) to width <= tol"""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if indicator.at(family, mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), hi - lo


@error_handler_decorator("threshold_scanner")
def find_threshold(family: StateFamily,
                   indicator: Union[Indicator, str],
                   q: Optional[Union[EntropicOrder, float, str]] = None,
                   grid: Optional[SpectralGrid] = None,
                   grid_step: Optional[float] = None,
                   bisect_tol: Optional[float] = None,
                   verdict_tol: Optional[float] = None) -> ThresholdResult:
    """
    Smallest parameter at which `indicator` becomes (and stays) positive

    Args:
        family: State family
        indicator: Indicator or label ('d_vn', 'd_l', 'r_inf', 'r_2', 'r_q', 'concurrence')
        q: Renyi order when indicator is 'r_q'
        grid: Precomputed SpectralGrid of the family (built when omitted)
        grid_step: Coarse scan step
        bisect_tol: Final bracket width
        verdict_tol: Grid values within this band of 0 count as non-positive

    Returns:
        ThresholdResult; p_min is None when no grid point is positive
    """
    if isinstance(indicator, str):
        indicator = Indicator.renyi(q) if indicator == 'r_q' else Indicator.parse(indicator)
    bisect_tol = TOLERANCES['bisection'] if bisect_tol is None else bisect_tol
    verdict_tol = TOLERANCES['verdict'] if verdict_tol is None else verdict_tol
    if grid is None:
        grid = SpectralGrid.build(family, grid_step,
                                  with_concurrence=indicator.kind == 'concurrence')
    order_value = indicator.order.value if indicator.order is not None else None

    values = grid.values(indicator)
    positive = values > verdict_tol
    if not positive.any():
        logger.debug("threshold_not_found", family=family.family_id, indicator=indicator.label)
        return ThresholdResult(family.family_id, indicator.label, None, 0.0, q=order_value)

    idx, non_monotone = _locate_crossing(positive)
    if idx is None:
        p_min, width = float(grid.params[0]), 0.0
    else:
        p_min, width = _bisect(family, indicator, float(grid.params[idx]),
                               float(grid.params[idx + 1]), bisect_tol)

    if non_monotone:
        message = (f"{indicator.label} on {family.family_id}: positive region is not a single "
                   f"upper interval; reporting the last crossing")
        warnings.warn(message, NonMonotoneWarning, stacklevel=2)
        logger.warning("non_monotone_indicator", family=family.family_id,
                       indicator=indicator.label, p_min=p_min)

    logger.debug("threshold_found", family=family.family_id, indicator=indicator.label,
                 p_min=p_min, bracket_width=width)
    return ThresholdResult(family.family_id, indicator.label, p_min, width,
                           non_monotone=non_monotone, q=order_value)


def build_q_grid(start: Optional[float] = None, stop: Optional[float] = None,
                 count: Optional[int] = None,
                 include_inf: Optional[bool] = None) -> List[EntropicOrder]:
    """
    Evenly spaced Renyi orders in [start, stop], optionally followed by infinity

    Raises:
        InvalidOrder: start < 1
        ParameterOutOfRange: stop < start or count < 1
    """
    start = SCAN_DEFAULTS['q_start'] if start is None else float(start)
    stop = SCAN_DEFAULTS['q_stop'] if stop is None else float(stop)
    count = SCAN_DEFAULTS['q_count'] if count is None else int(count)
    include_inf = SCAN_DEFAULTS['include_inf'] if include_inf is None else include_inf

    EntropicOrder(start)
    if stop < start or count < 1:
        raise ParameterOutOfRange(f"need start <= stop and count >= 1, got "
                                  f"[{start}, {stop}] x {count}", start=start, stop=stop, count=count)
    values = [start] if count == 1 else list(np.linspace(start, stop, count))
    orders = [EntropicOrder(float(v)) for v in values]
    if include_inf:
        orders.append(EntropicOrder(math.inf))
    return orders


@error_handler_decorator("threshold_scanner")
@performance_monitor("threshold_scanner")
def q_sweep(family: StateFamily,
            q_grid: Sequence[Union[EntropicOrder, float, str]],
            grid: Optional[SpectralGrid] = None,
            grid_step: Optional[float] = None,
            workers: Optional[int] = None,
            bisect_tol: Optional[float] = None,
            verdict_tol: Optional[float] = None) -> List[ThresholdResult]:
    """
    p_min of R_q for every q in q_grid, in input order

    Raises:
        InvalidOrder: a q below 1
        ParameterOutOfRange: q_grid not ascending
    """
    orders = [EntropicOrder.of(q) for q in q_grid]
    if any(b.value < a.value for a, b in zip(orders, orders[1:])):
        raise ParameterOutOfRange("q grid must be sorted ascending")
    if grid is None:
        grid = SpectralGrid.build(family, grid_step, with_concurrence=False)
    workers = SCAN_DEFAULTS['workers'] if workers is None else max(1, int(workers))

    def threshold_at(order: EntropicOrder) -> ThresholdResult:
        return find_threshold(family, Indicator.renyi(order), grid=grid,
                              bisect_tol=bisect_tol, verdict_tol=verdict_tol)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(threshold_at, orders))

    logger.info("q_sweep_complete", family=family.family_id, points=len(results), workers=workers)
    return results


@error_handler_decorator("threshold_scanner")
@performance_monitor("threshold_scanner")
def table_rows(family: StateFamily,
               grid_step: Optional[float] = None,
               bisect_tol: Optional[float] = None,
               verdict_tol: Optional[float] = None) -> List[ThresholdResult]:
    """Thresholds of d_vn, d_l, r_inf, r_2 and, where defined, the concurrence"""
    grid = SpectralGrid.build(family, grid_step)
    labels = list(TABLE_INDICATORS)
    if family.N != 2:
        labels.remove('d_l')
    if family.has_concurrence:
        labels.append('concurrence')
    return [find_threshold(family, Indicator.parse(label), grid=grid,
                           bisect_tol=bisect_tol, verdict_tol=verdict_tol)
            for label in labels]


@dataclass(frozen=True)
class ThetaRow:
    theta: float
    d_vn: float
    d_l: float
    r_inf: float
    r_2: float
    concurrence: float
    entangled: bool
    detected: bool


@dataclass(frozen=True)
class ThetaSweep:
    rows: Tuple[ThetaRow, ...]

    @property
    def all_entangled_detected(self) -> bool:
        return all(row.detected for row in self.rows if row.entangled)

    @property
    def entangled_count(self) -> int:
        return sum(1 for row in self.rows if row.entangled)


def theta_detection_sweep(points: Optional[int] = None,
                          verdict_tol: Optional[float] = None) -> ThetaSweep:
    """
    Indicators and concurrence of the theta-state on an even grid over [0, pi]

    A row is entangled when its concurrence exceeds the verdict tolerance and
    detected when d_vn, d_l, r_2 and r_inf all do.
    """
    points = SCAN_DEFAULTS['theta_points'] if points is None else int(points)
    if points < 2:
        raise ParameterOutOfRange(f"need at least 2 theta points, got {points}", points=points)
    tol = TOLERANCES['verdict'] if verdict_tol is None else verdict_tol

    rows = []
    for theta in np.linspace(0.0, math.pi, points):
        rho = theta_state(float(theta))
        pair = SpectralPair.of(rho)
        values = {'d_vn': pair.d_von_neumann(), 'd_l': pair.d_linear(),
                  'r_inf': pair.r_infinity(), 'r_2': pair.r_q(2.0)}
        concurrence = esbl_concurrence(rho)
        detected = all(verdict_of(v, tol) == Verdict.ENTANGLED for v in values.values())
        rows.append(ThetaRow(theta=float(theta), concurrence=concurrence,
                             entangled=concurrence > tol, detected=detected, **values))

    sweep = ThetaSweep(tuple(rows))
    logger.info("theta_sweep_complete", points=points, entangled=sweep.entangled_count,
                all_entangled_detected=sweep.all_entangled_detected)
    return sweep


def nfermion_threshold_fraction(N: int, n: int) -> Fraction:
    """
    Exact R_inf threshold [N (n-1)! - (n-N)! N!] / [n! - (n-N)! N!] of the N-fermion family

    Raises:
        InvalidDimensions: n not a multiple of N, n <= N, or n beyond MAX_FACTORIAL_N
    """
    N, n = int(N), int(n)
    if N < 2 or n <= N or n % N != 0:
        raise InvalidDimensions(f"need N >= 2 and n = kN with k >= 2, got N={N}, n={n}", N=N, n=n)
    if n > MAX_FACTORIAL_N:
        raise InvalidDimensions(f"n={n} exceeds the exact-factorial limit {MAX_FACTORIAL_N}",
                                n=n, limit=MAX_FACTORIAL_N)
    base = math.factorial(n - N) * math.factorial(N)
    return Fraction(N * math.factorial(n - 1) - base, math.factorial(n) - base)


def nfermion_threshold_closed_form(N: int, n: int) -> float:
    return float(nfermion_threshold_fraction(N, n))


@error_handler_decorator("threshold_scanner")
@performance_monitor("threshold_scanner")
def nfermion_threshold_numeric(N: int, k: int,
                               grid_step: Optional[float] = None,
                               bisect_tol: Optional[float] = None) -> float:
    """
    R_inf threshold of the N-fermion Werner-like family found by scan and bisection

    Raises:
        InvalidDimensions, DimensionTooLarge
    """
    general_werner_vector(int(N), int(k))
    family = general_werner_family(int(N), int(k))
    result = find_threshold(family, Indicator.renyi(math.inf), grid_step=grid_step,
                            bisect_tol=bisect_tol)
    if result.p_min is None:
        raise ConvergenceFailure(f"R_inf never positive for N={N}, k={k}", N=N, k=k)
    logger.info("nfermion_threshold", N=N, k=k, p_min=result.p_min)
    return result.p_min
