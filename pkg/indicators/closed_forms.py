"""
Analytical indicator curves of the reference state families
Used as oracles for the numerical indicators and by the CLI self-test.
All expressions follow the 0 ln 0 = 0 convention.
"""

import math
from typing import Callable, Dict, Tuple

from utils.error_handler import UnknownFamily

LN2 = math.log(2.0)


def _xlogy(x: float, y: float) -> float:
    """x ln y, with 0 ln 0 = 0"""
    if x == 0.0:
        return 0.0
    return x * math.log(y)


def werner_d_vn(p: float) -> float:
    return (LN2 + (5 / 6) * _xlogy(1 - p, (1 - p) / 6)
            + (1 / 6) * _xlogy(1 + 5 * p, (1 + 5 * p) / 6))


def werner_d_l(p: float) -> float:
    return -7 / 12 + 5 * p ** 2 / 6


def werner_r_2(p: float) -> float:
    return math.log((1 + 5 * p ** 2) / 3)


def werner_r_inf(p: float) -> float:
    return math.log((1 + 5 * p) / 3)


def theta_d_vn(theta: float) -> float:
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    return -LN2 - _xlogy(c2, c2 / 2) - _xlogy(s2, s2 / 2)


def theta_d_l(theta: float) -> float:
    return math.cos(theta) ** 2 * math.sin(theta) ** 2


def gisin_d_vn(p: float) -> float:
    return _xlogy(1 - p, 1 - p) + _xlogy(p, 2 * p)


def gisin_d_l(p: float) -> float:
    return (-1 - 4 * p + 6 * p ** 2) / 4


def gisin_r_inf(p: float) -> float:
    return math.log(2 * max(p, (1 - p) / 2))


def _dim6_1_d_vn(p: float) -> float:
    return (math.log(3) + (14 / 15) * _xlogy(1 - p, (1 - p) / 15)
            + (1 / 15) * _xlogy(1 + 14 * p, (1 + 14 * p) / 15))


def _dim6_2_d_vn(p: float) -> float:
    return (-45 * LN2
            + 42 * _xlogy(1 - p, (1 - p) / 15)
            - 5 * _xlogy(3 - 2 * p, 1 / 6 - p / 9)
            - 10 * _xlogy(3 + p, (3 + p) / 18)
            + 3 * _xlogy(1 + 14 * p, (1 + 14 * p) / 15)) / 45


def _dim6_3_d_vn(p: float) -> float:
    # 7776 = 6**5, 248832 = 12**5, 30517578125 = 5**15
    return (-p * math.log(7776) + p * math.log(248832)
            + 9 * _xlogy(1 - p, 1 - p)
            - 5 * _xlogy(2 + p, 2 + p)
            + math.log(1024 * (1 + 14 * p) / 30517578125)
            + 14 * _xlogy(p, 1 + 14 * p)) / 15


_DIM6_D_VN: Dict[int, Callable[[float], float]] = {
    1: _dim6_1_d_vn,
    2: _dim6_2_d_vn,
    3: _dim6_3_d_vn,
}

# D_L = offset + slope * p**2
_DIM6_D_L: Dict[int, Tuple[float, float]] = {
    1: (-9 / 15, 14 / 15),
    2: (-3 / 5, 121 / 135),
    3: (-3 / 5, 17 / 20),
}


def _dim6_lookup(table: dict, which: int):
    try:
        return table[which]
    except KeyError:
        raise UnknownFamily(f"dim-6 family {which!r} not in {{1, 2, 3}}", which=which)


def dim6_d_vn(which: int, p: float) -> float:
    return _dim6_lookup(_DIM6_D_VN, which)(p)


def dim6_d_l(which: int, p: float) -> float:
    offset, slope = _dim6_lookup(_DIM6_D_L, which)
    return offset + slope * p ** 2


def dim6_1_r_inf(p: float) -> float:
    return math.log((1 + 14 * p) / 5)


# Exact detection thresholds: (family id, indicator label) -> p_min
KNOWN_ROOTS: Dict[Tuple[str, str], float] = {
    ('werner', 'd_l'): math.sqrt(0.7),
    ('werner', 'r_inf'): 0.4,
    ('werner', 'r_2'): math.sqrt(2 / 5),
    ('werner', 'concurrence'): 0.4,
    ('gisin', 'd_l'): (2 + math.sqrt(10)) / 6,
    ('gisin', 'r_inf'): 0.5,
    ('gisin', 'concurrence'): 0.5,
    ('dim6-1', 'd_l'): 3 / math.sqrt(14),
    ('dim6-1', 'r_inf'): 2 / 7,
    ('dim6-2', 'd_l'): 9 / 11,
    ('dim6-3', 'd_l'): 2 * math.sqrt(3 / 17),
}

# Three-decimal thresholds of the reference tables
TABLE_VALUES: Dict[str, Dict[str, float]] = {
    'werner': {'d_vn': 0.809, 'd_l': 0.837, 'r_inf': 0.4, 'r_2': 0.632},
    'gisin': {'d_vn': 0.773, 'd_l': 0.860, 'r_inf': 0.5, 'r_2': 0.667},
    'dim6-1': {'d_vn': 0.767, 'd_l': 0.802, 'r_inf': 2 / 7, 'r_2': 0.535},
    'dim6-2': {'d_vn': 0.788, 'd_l': 9 / 11, 'r_inf': 0.324, 'r_2': 0.557},
    'dim6-3': {'d_vn': 0.825, 'd_l': 0.840, 'r_inf': 0.348, 'r_2': 0.590},
}


def closed_form_curves() -> Dict[Tuple[str, str], Callable[[float], float]]:
    """(family id, indicator label) -> analytical indicator as a function of the family parameter"""
    curves: Dict[Tuple[str, str], Callable[[float], float]] = {
        ('werner', 'd_vn'): werner_d_vn,
        ('werner', 'd_l'): werner_d_l,
        ('werner', 'r_2'): werner_r_2,
        ('werner', 'r_inf'): werner_r_inf,
        ('theta', 'd_vn'): theta_d_vn,
        ('theta', 'd_l'): theta_d_l,
        ('gisin', 'd_vn'): gisin_d_vn,
        ('gisin', 'd_l'): gisin_d_l,
        ('gisin', 'r_inf'): gisin_r_inf,
        ('dim6-1', 'r_inf'): dim6_1_r_inf,
    }
    for which in (1, 2, 3):
        curves[(f'dim6-{which}', 'd_vn')] = lambda p, w=which: dim6_d_vn(w, p)
        curves[(f'dim6-{which}', 'd_l')] = lambda p, w=which: dim6_d_l(w, p)
    return curves
