"""Double-double reference values for Gauss-Hermite and Gauss-Legendre rules.

Zeros are bracketed by sign changes of the three-term recurrence on a grid
spaced at half the local zero gap, refined by safeguarded Newton in double and
then polished by Newton steps in double-double (about 30 correct digits).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _oracle_kernels as ok
from .dd import DDArray, DoubleDouble, dd_div, dd_mul, dd_sub, dd_add_d
from .errors import BracketingIncomplete, DomainViolation, LengthMismatch
from .rule import Family, QuadratureRule

ORACLE_MAX_N = 10_000
SQRT_PI = DoubleDouble(1.772453850905516, -7.666586499825799e-17)
# smallest normal double; oracle weights below it cannot be compared relatively
MIN_NORMAL = 2.2250738585072014e-308


class OracleValue(NamedTuple):
    """Classical polynomial value and derivative, each times 2**exponent."""

    value: DoubleDouble
    derivative: DoubleDouble
    exponent: int


@dataclass
class CompareReport:
    family: Family
    n: int
    per_node_re: np.ndarray
    per_weight_re: np.ndarray
    max_node_re: float
    max_weight_re: float
    excluded_weights: int = 0


def _kind(family: Family, classic: bool = False) -> int:
    if family is Family.LEGENDRE:
        return ok.LEGENDRE
    return ok.HERMITE_CLASSIC if classic else ok.HERMITE_ON


def _check_n(n: int, cap: int | None = ORACLE_MAX_N) -> None:
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if cap is not None and n > cap:
        raise ValueError(f"oracle supports n <= {cap}, got {n}")


def oracle_eval(family: Family | str, n: int, x) -> OracleValue:
    """P_n(x) or H_n(x) and the derivative in double-double.

    >>> float(oracle_eval("legendre", 2, 0.5).value)
    -0.125
    """
    family = Family.parse(family)
    _check_n(n, cap=None)
    x = DoubleDouble.coerce(x)
    xf = float(x)
    if family is Family.LEGENDRE:
        if abs(xf) > 1.0:
            raise DomainViolation(f"Legendre oracle needs |x| <= 1, got {xf}")
    elif abs(xf) > np.sqrt(2.0 * n + 1.0) + 1.0:
        raise DomainViolation(f"Hermite oracle needs |x| <= sqrt(2n+1)+1, got {xf}")
    kind = _kind(family, classic=True)
    table = ok.recurrence_table(kind, n)
    ph, pl, qh, ql, e = ok.eval_many(kind, n, np.array([x.hi]), np.array([x.lo]), table)
    value = DoubleDouble(ph[0], pl[0])
    if family is Family.LEGENDRE and abs(xf) == 1.0:
        # derivative formula is singular at the endpoints
        sign = 1 if xf > 0 or n % 2 == 1 else -1
        deriv = DoubleDouble.coerce(sign * n * (n + 1) // 2)
    else:
        dh, dl = ok.derivative_dd(kind, n, np.array([x.hi]), np.array([x.lo]), ph, pl, qh, ql)
        deriv = DoubleDouble(dh[0], dl[0])
    return OracleValue(value, deriv, int(e[0]) * ok.RESCALE_BITS)


def oracle_zeros(family: Family | str, n: int) -> DDArray:
    """Positive zeros in ascending order."""
    family = Family.parse(family)
    _check_n(n)
    kind = _kind(family)
    table = ok.recurrence_table(kind, n)
    lo, hi, flo = ok.bracket_zeros(kind, n, table)
    if len(lo) != n // 2:
        raise BracketingIncomplete(f"{family.value} n={n}: bracketed {len(lo)} zeros, expected {n // 2}")
    if len(lo) == 0:
        return DDArray(np.zeros(0))
    xh, xl = ok.refine_brackets(kind, n, lo, hi, flo, table)
    return DDArray(xh, xl)


def refine_zeros(family: Family | str, n: int, approx, steps: int = 3) -> DDArray:
    """Polish approximate zeros by double-double Newton (sampled checks beyond the cap)."""
    family = Family.parse(family)
    _check_n(n, cap=None)
    kind = _kind(family)
    table = ok.recurrence_table(kind, n)
    approx = np.asarray(approx, dtype=np.float64)
    xh, xl = ok.dd_newton_many(kind, n, approx, np.zeros_like(approx), table, steps)
    return DDArray(xh, xl)


def oracle_weights(family: Family | str, n: int, zeros: DDArray) -> DDArray:
    """Gauss weights at the given zeros, in double-double."""
    family = Family.parse(family)
    kind = _kind(family)
    table = ok.recurrence_table(kind, n)
    xh, xl = zeros.hi, zeros.lo
    ph, pl, qh, ql, e = ok.eval_many(kind, n, xh, xl, table)
    if family is Family.LEGENDRE:
        dh, dl = ok.derivative_dd(kind, n, xh, xl, ph, pl, qh, ql)
        # 2 / ((1 - x)(1 + x) P'^2)
        uh, ul = dd_add_d(-xh, -xl, 1.0)
        vh, vl = dd_add_d(xh, xl, 1.0)
        uh, ul = dd_mul(uh, ul, vh, vl)
        dh, dl = dd_mul(dh, dl, dh, dl)
        uh, ul = dd_mul(uh, ul, dh, dl)
        wh, wl = dd_div(2.0 + 0.0 * uh, 0.0 * uh, uh, ul)
        return DDArray(wh, wl)
    # sqrt(pi) / (n q_{n-1}^2), q carrying a factor 2**(500 e); divide by q twice
    # so no operand exceeds the Dekker-split overflow bound
    wh, wl = dd_div(SQRT_PI.hi + 0.0 * qh, SQRT_PI.lo + 0.0 * qh, qh, ql)
    wh, wl = dd_div(wh, wl, qh, ql)
    wh, wl = dd_div(wh, wl, float(n) + 0.0 * qh, 0.0 * qh)
    shift = (-2 * ok.RESCALE_BITS * e).astype(np.int64)
    return DDArray(np.ldexp(wh, shift), np.ldexp(wl, shift))


def oracle_rule(family: Family | str, n: int) -> tuple[DDArray, DDArray]:
    """Full ascending node and weight arrays of the n-point rule."""
    family = Family.parse(family)
    pos = oracle_zeros(family, n)
    hi = np.concatenate([-pos.hi[::-1], np.zeros(n % 2), pos.hi])
    lo = np.concatenate([-pos.lo[::-1], np.zeros(n % 2), pos.lo])
    nodes = DDArray(hi, lo)
    return nodes, oracle_weights(family, n, nodes)


def _relative_errors(d: np.ndarray, q: DDArray, abs_when_zero: bool) -> np.ndarray:
    qh, ql = q.hi, q.lo
    zero = qh == 0.0
    safe_h = np.where(zero, 1.0, qh)
    safe_l = np.where(zero, 0.0, ql)
    # |1 - d/q| = |(q - d) / q|, evaluated in double-double
    rh, rl = dd_sub(safe_h, safe_l, d + 0.0 * qh, 0.0 * qh)
    rh, rl = dd_div(rh, rl, safe_h, safe_l)
    re = np.abs(rh + rl)
    if abs_when_zero:
        re = np.where(zero, np.abs(d), re)
    return re


def relative_error_report(rule: QuadratureRule, oracle_nodes: DDArray, oracle_weights: DDArray) -> CompareReport:
    """Per-node and per-weight |1 - computed/reference|.

    The exact zero node is compared by absolute error.  Reference weights that
    are subnormal or zero are excluded (NaN entry) since no double can carry
    them to relative accuracy.
    """
    nodes = np.asarray(rule.nodes, dtype=np.float64)
    weights = np.asarray(rule.weights, dtype=np.float64)
    if not (len(nodes) == len(weights) == len(oracle_nodes) == len(oracle_weights)):
        raise LengthMismatch(
            f"lengths differ: nodes {len(nodes)}, weights {len(weights)}, "
            f"oracle nodes {len(oracle_nodes)}, oracle weights {len(oracle_weights)}"
        )
    node_re = _relative_errors(nodes, oracle_nodes, abs_when_zero=True)
    tiny = np.abs(oracle_weights.hi) < MIN_NORMAL
    weight_re = _relative_errors(weights, oracle_weights, abs_when_zero=False)
    weight_re = np.where(tiny, np.nan, weight_re)
    return CompareReport(
        family=rule.family,
        n=rule.n,
        per_node_re=node_re,
        per_weight_re=weight_re,
        max_node_re=float(np.max(node_re)) if len(node_re) else 0.0,
        max_weight_re=float(np.nanmax(weight_re)) if np.any(~tiny) else 0.0,
        excluded_weights=int(np.count_nonzero(tiny)),
    )
