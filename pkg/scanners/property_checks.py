"""
Self-test Property Checks
Runs the properties every correct build must satisfy:
  - random separable states never produce a positive R_q or D_L
  - the analytical indicator curves match the numerics
  - random pure antisymmetric states respect 1/n <= Tr(rho_r^2) <= 1/2
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from config.entanglement_config import DEFAULT_Q_GRID, SELFTEST_DEFAULTS
from indicators.closed_forms import closed_form_curves
from indicators.entropic_criteria import SpectralPair
from numerics.entropy import EntropicOrder
from states.fermion_states import partial_trace_single, random_antisymmetric_pure, random_separable
from utils.common import setup_logging
from utils.error_handler import PropertyViolation, error_handler_decorator, performance_monitor
from .families import get_family
from .threshold_scanner import Indicator

logger = setup_logging(__name__)

CLOSED_FORM_TOLERANCE = 1e-9
PURE_STATE_SAMPLES = 100


@dataclass
class SelfTestSummary:
    seed: int
    count: int
    n: int
    max_r_q: Dict[str, float] = field(default_factory=dict)
    max_d_l: float = float('-inf')
    closed_form_deviation: float = 0.0
    purity_range: Optional[tuple] = None
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def lines(self) -> List[str]:
        out = [f"selftest seed={self.seed} count={self.count} n={self.n}"]
        if self.count == 0:
            out.append("separable sample: empty (vacuous pass)")
        else:
            for label, value in self.max_r_q.items():
                out.append(f"max {label}: {value:.12f}")
            out.append(f"max d_l: {self.max_d_l:.12f}")
        out.append(f"closed-form max deviation: {self.closed_form_deviation:.3e}")
        if self.purity_range is not None:
            low, high = self.purity_range
            out.append(f"pure-state Tr(rho_r^2) range: [{low:.12f}, {high:.12f}]")
        out.extend(f"VIOLATION: {v}" for v in self.violations)
        out.append("PASS" if self.passed else "FAIL")
        return out


def check_separable_states(summary: SelfTestSummary, max_terms: int, tol: float) -> None:
    orders = [EntropicOrder.of(q) for q in DEFAULT_Q_GRID]
    summary.max_r_q = {f"r_{order.label}": float('-inf') for order in orders}
    rng = np.random.default_rng(summary.seed)
    for _ in range(summary.count):
        terms = int(rng.integers(1, max_terms + 1))
        rho = random_separable(summary.n, terms, seed=int(rng.integers(2 ** 32)))
        pair = SpectralPair.of(rho)
        for order in orders:
            label = f"r_{order.label}"
            summary.max_r_q[label] = max(summary.max_r_q[label], pair.r_q(order))
        summary.max_d_l = max(summary.max_d_l, pair.d_linear())

    for label, value in summary.max_r_q.items():
        if value > tol:
            summary.violations.append(f"{label} = {value:.3e} on a separable state")
    if summary.count and summary.max_d_l > tol:
        summary.violations.append(f"d_l = {summary.max_d_l:.3e} on a separable state")


def check_closed_forms(summary: SelfTestSummary, points: int) -> None:
    worst = 0.0
    for (family_id, label), curve in closed_form_curves().items():
        family = get_family(family_id)
        indicator = Indicator.parse(label)
        lo, hi = family.interval
        for p in np.linspace(lo, hi, points):
            deviation = abs(indicator.evaluate(family(float(p))) - curve(float(p)))
            worst = max(worst, deviation)
            if deviation > CLOSED_FORM_TOLERANCE:
                summary.violations.append(
                    f"{family_id} {label} at {p:.4f} deviates from its closed form by {deviation:.3e}")
    summary.closed_form_deviation = worst


def check_pure_state_purity(summary: SelfTestSummary, tol: float) -> None:
    n = summary.n
    purities = []
    for i in range(PURE_STATE_SAMPLES):
        rho = random_antisymmetric_pure(n, seed=summary.seed + i)
        purities.append(partial_trace_single(rho).purity())
    low, high = min(purities), max(purities)
    summary.purity_range = (low, high)
    if low < 1.0 / n - tol or high > 0.5 + tol:
        summary.violations.append(f"pure-state purity range [{low}, {high}] outside [1/{n}, 1/2]")


@error_handler_decorator("selftest", severity='critical')
@performance_monitor("selftest")
def run_selftest(seed: Optional[int] = None, count: Optional[int] = None,
                 n: Optional[int] = None, max_terms: Optional[int] = None,
                 raise_on_violation: bool = True) -> SelfTestSummary:
    """
    Raises:
        PropertyViolation: any checked property fails (when raise_on_violation)
    """
    summary = SelfTestSummary(
        seed=SELFTEST_DEFAULTS['seed'] if seed is None else int(seed),
        count=SELFTEST_DEFAULTS['count'] if count is None else int(count),
        n=SELFTEST_DEFAULTS['n'] if n is None else int(n),
    )
    max_terms = SELFTEST_DEFAULTS['max_terms'] if max_terms is None else int(max_terms)
    tol = SELFTEST_DEFAULTS['violation_tol']

    if summary.count == 0:
        logger.warning("selftest_empty_sample", seed=summary.seed, n=summary.n)
    check_separable_states(summary, max_terms, tol)
    check_closed_forms(summary, SELFTEST_DEFAULTS['closed_form_points'])
    check_pure_state_purity(summary, tol)

    logger.info("selftest_complete", passed=summary.passed, violations=len(summary.violations),
                closed_form_deviation=summary.closed_form_deviation)
    if raise_on_violation and not summary.passed:
        raise PropertyViolation("; ".join(summary.violations), violations=summary.violations)
    return summary
