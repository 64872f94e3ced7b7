"""Local Taylor expansions of the Hermite and Legendre normal-form solutions.

Hermite:  f = exp(-x^2/2) H_n(x) (up to a constant),  f'' + (2n+1-x^2) f = 0.
Legendre: f = sqrt(1-x^2) P_n(x) (up to a constant),  D f'' + E f = 0 with
          D = 4(1-x^2)^2 and E = (4n^2+4n)(1-x^2) + 4.

Coefficients are stored scaled (``scaled[j] = c_j * scale**j``) because the raw
``c_j`` overflow quickly for large n or near x = +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _series as S
from .errors import DomainViolation, HopTooLarge
from .rule import Family


class PairValue(NamedTuple):
    f: float
    fp: float
    order: int
    truncated: bool


@dataclass
class TaylorExpansion:
    family: Family
    n: int
    center: float
    scale: float
    scaled: np.ndarray
    max_order: int
    order_used: int = 0
    truncated: bool = False  # seed came from an evaluation that hit the order cap

    @property
    def coeffs(self) -> np.ndarray:
        """Raw Taylor coefficients c_0..c_N (may overflow to inf for large orders)."""
        j = np.arange(self.max_order + 1)
        with np.errstate(over="ignore"):
            return self.scaled[: self.max_order + 1] / self.scale**j

    @property
    def seed(self) -> tuple[float, float]:
        return float(self.scaled[0]), float(self.scaled[1] / self.scale)


def _check_degree(n: int) -> None:
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")


def _build(family: Family, n: int, x0: float, f0: float, f1: float, max_order: int) -> TaylorExpansion:
    cap = S.family_cap(family.code)
    if not 1 <= max_order <= cap:
        raise ValueError(f"max_order must lie in [1, {cap}] for {family.value}, got {max_order}")
    a, s = S.build_coeffs(family.code, n, float(x0), float(f0), float(f1), max_order)
    return TaylorExpansion(family, n, float(x0), float(s), a, max_order)


def hermite_coeffs(n: int, x0: float, f0: float, f1: float, max_order: int = S.HERMITE_CAP) -> TaylorExpansion:
    """Expansion about x0 of the solution with f(x0) = f0, f'(x0) = f1.

    >>> e = hermite_coeffs(2, 0.0, 1.0, 0.0)
    >>> float(e.coeffs[2])
    -2.5
    """
    _check_degree(n)
    return _build(Family.HERMITE, n, x0, f0, f1, max_order)


def legendre_coeffs(n: int, x0: float, f0: float, f1: float, max_order: int = S.LEGENDRE_CAP) -> TaylorExpansion:
    _check_degree(n)
    if not abs(x0) < 1.0:
        raise DomainViolation(f"Legendre expansion needs |x0| < 1, got {x0}")
    return _build(Family.LEGENDRE, n, x0, f0, f1, max_order)


def default_tolerance(family: Family) -> float:
    return S.family_tol(family.code)


def evaluate_pair(exp: TaylorExpansion, x: float, trunc_tol: float | None = None) -> PairValue:
    """(f, f') at x by the truncated series; ``truncated`` is set if the order cap was hit."""
    tol = default_tolerance(exp.family) if trunc_tol is None else trunc_tol
    f, fp, order, ok, _ = S.series_sum(
        exp.family.code, exp.n, exp.center, exp.scale, exp.scaled, exp.max_order + 1,
        float(x) - exp.center, tol, exp.max_order,
    )
    exp.order_used = int(order)
    return PairValue(float(f), float(fp), int(order), not ok)


def max_displacement(exp: TaylorExpansion) -> float:
    """Longest hop trusted from this centre (two local zero gaps, and half the
    distance to x = +-1 for Legendre)."""
    return float(S.max_hop(exp.family.code, exp.n, exp.center))


def advance_center(exp: TaylorExpansion, new_center: float, trunc_tol: float | None = None) -> TaylorExpansion:
    """Re-expand about new_center, seeded from this expansion's value there."""
    d = float(new_center) - exp.center
    limit = max_displacement(exp)
    if abs(d) > limit:
        raise HopTooLarge(f"hop of {abs(d):.3g} exceeds the trusted radius {limit:.3g} at {exp.center}")
    val = evaluate_pair(exp, new_center, trunc_tol)
    out = _build(exp.family, exp.n, new_center, val.f, val.fp, exp.max_order)
    out.truncated = val.truncated
    return out


def initial_seed(n: int) -> tuple[float, float]:
    """(f, f') at 0: (0, 1) for odd n, (1, 0) for even n."""
    return (0.0, 1.0) if n % 2 else (1.0, 0.0)


class TaylorMarcher:
    """Stateful (f, f') evaluator that walks one centre along the axis.

    Every evaluation re-centres at the evaluated point.  Not safe to share
    between concurrent marches.
    """

    def __init__(self, family: Family | str, n: int):
        self.family = Family.parse(family)
        _check_degree(n)
        self.n = n
        self.center = 0.0
        self.f, self.fp = initial_seed(n)
        self.evaluations = 0
        self.truncations = 0
        self._buf = np.zeros(S.family_cap(self.family.code) + 3)

    def pair(self, x: float) -> tuple[float, float]:
        x = float(x)
        if self.family is Family.LEGENDRE and not abs(x) < 1.0:
            raise DomainViolation(f"Legendre evaluation needs |x| < 1, got {x}")
        f, fp, ok, _ = S.advance(self.family.code, self.n, self.center, self.f, self.fp, x, self._buf)
        self.center, self.f, self.fp = x, float(f), float(fp)
        self.evaluations += 1
        if not ok:
            self.truncations += 1
        return self.f, self.fp

    def ratio(self, x: float) -> float:
        """f/f'; +-inf signals a pole (f' = 0)."""
        f, fp = self.pair(x)
        if fp == 0.0 or abs(fp) < 1e-300 * abs(f):
            return math.copysign(math.inf, f)
        return f / fp

    def b_ratio(self, x: float) -> float:
        """f / ((1-x^2) f' + x f), the ratio of the tanh-transformed problem."""
        f, fp = self.pair(x)
        den = (1.0 - x) * (1.0 + x) * fp + x * f
        if den == 0.0 or abs(den) < 1e-300 * abs(f):
            return math.copysign(math.inf, f)
        return f / den
