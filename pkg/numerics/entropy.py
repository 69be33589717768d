"""
Entropy functionals on spectra (natural logarithms)
Renyi S_q for q in [1, inf], von Neumann (q = 1), min-entropy (q = inf), linear entropy
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from utils.error_handler import InvalidOrder, ParameterOutOfRange
from .linalg_core import Spectrum

# Orders in [1, 1 + VON_NEUMANN_WINDOW) use the von Neumann branch
VON_NEUMANN_WINDOW = 1e-9
# Entries dropped from the -sum(l ln l) sum
ZERO_EIGENVALUE = 1e-15


@dataclass(frozen=True)
class EntropicOrder:
    """Renyi order q >= 1; math.inf is the min-entropy order"""
    value: float

    def __post_init__(self):
        value = float(self.value)
        if math.isnan(value) or value < 1.0:
            raise InvalidOrder(f"entropic order q={self.value} must be >= 1", q=self.value)
        object.__setattr__(self, 'value', value)

    @classmethod
    def of(cls, q: Union['EntropicOrder', float, int, str]) -> 'EntropicOrder':
        if isinstance(q, EntropicOrder):
            return q
        if isinstance(q, str):
            return cls.parse(q)
        return cls(q)

    @classmethod
    def parse(cls, text: str) -> 'EntropicOrder':
        token = text.strip().lower()
        if token in ('inf', 'infinity', '+inf'):
            return cls(math.inf)
        try:
            return cls(float(token))
        except ValueError:
            raise InvalidOrder(f"cannot parse entropic order {text!r}", q=text)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def is_von_neumann(self) -> bool:
        return self.value < 1.0 + VON_NEUMANN_WINDOW

    @property
    def label(self) -> str:
        if self.is_infinite:
            return 'inf'
        return f"{self.value:g}"

    def __str__(self) -> str:
        return self.label


INFINITY = EntropicOrder(math.inf)


def _positive(spectrum: Spectrum) -> np.ndarray:
    vals = spectrum.values
    return vals[vals > ZERO_EIGENVALUE]


def von_neumann(spectrum: Spectrum) -> float:
    """-sum(l ln l) with 0 ln 0 = 0"""
    vals = _positive(spectrum)
    return float(-np.sum(vals * np.log(vals)))


def _finite_renyi(spectrum: Spectrum, q: float) -> float:
    vals = _positive(spectrum)
    return float(np.log(np.sum(vals ** q)) / (1.0 - q))


def renyi(spectrum: Spectrum, q: Union[EntropicOrder, float, str]) -> float:
    """
    Renyi entropy S_q = ln(sum l^q) / (1 - q)

    Raises:
        InvalidOrder: q < 1
    """
    order = EntropicOrder.of(q)
    if order.is_infinite:
        return -math.log(spectrum.max)
    if order.is_von_neumann:
        return von_neumann(spectrum)
    return _finite_renyi(spectrum, order.value)


def linear_entropy(spectrum: Spectrum) -> float:
    """1 - Tr(rho^2)"""
    return 1.0 - spectrum.purity()


def renyi_continuity_check(spectrum: Spectrum, q: float) -> float:
    """
    Finite-q Renyi value evaluated directly for q just off 1 (no von Neumann dispatch)

    Raises:
        ParameterOutOfRange: q == 1 or |q - 1| > 0.01
    """
    q = float(q)
    if q == 1.0 or abs(q - 1.0) > 0.01:
        raise ParameterOutOfRange(f"q={q} must satisfy 0 < |q - 1| <= 0.01", q=q)
    return _finite_renyi(spectrum, q)
