"""Zeros of solutions of f'' + r(x) f = 0 by the (modified) Halley iteration.

With h = f/f' the Riccati ratio, one step is

    x <- x - 2h / (2 + r h^2)

The modified scheme freezes r at the initial guess of each zero.  Arithmetic is
generic: any number type with + - * / works for the steps, and sweeps/planning
use ``problem.ops`` (``math`` by default; pass ``mpmath`` for extended runs).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import ModuleType
from typing import Any, Callable

from .errors import DomainViolation, PoleEncountered, SweepCapExceeded
from .rule import IterationTrace, Termination


class RTrend(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass
class OdeProblem:
    """f'' + r f = 0 on an open interval where r > 0 and r is monotone.

    ``ratio(x)`` returns h = f/f'; an infinite (or NaN) value, or raising
    :class:`PoleEncountered`, signals f'(x) = 0.  The march direction follows
    the trend: rightwards when r decreases, leftwards when it increases.
    """

    ratio: Callable[[Any], Any]
    coeff_r: Callable[[Any], Any]
    r_trend: RTrend
    domain: tuple[float, float]
    ops: ModuleType = field(default=math)

    @property
    def direction(self) -> int:
        return 1 if self.r_trend is RTrend.DECREASING else -1

    def contains(self, x) -> bool:
        lo, hi = self.domain
        return lo < x < hi

    def r(self, x):
        if not self.contains(x):
            raise DomainViolation(f"x = {x} outside {self.domain}")
        val = self.coeff_r(x)
        if not val > 0:
            raise DomainViolation(f"r({x}) = {val} is not positive")
        return val

    def h(self, x):
        if not self.contains(x):
            raise DomainViolation(f"x = {x} outside {self.domain}")
        val = self.ratio(x)
        if _is_pole(val):
            raise PoleEncountered(f"f'({x}) = 0")
        return val


@dataclass
class SweepConfig:
    """Stopping rule and safety caps of a march.

    ``step_reference`` picks the denominator of the relative step test:
    "previous" uses the iterate before the step, "current" the one after.
    """

    rel_step_tol: float = 1e-10
    max_iters_per_zero: int = 20
    max_sweep_steps: int = 40
    step_reference: str = "previous"

    def __post_init__(self):
        if not 0 < self.rel_step_tol < 1:
            raise ValueError(f"rel_step_tol must lie in (0, 1), got {self.rel_step_tol}")
        if self.max_iters_per_zero < 1 or self.max_sweep_steps < 1:
            raise ValueError("iteration and sweep caps must be >= 1")
        if self.step_reference not in ("previous", "current"):
            raise ValueError(f"step_reference must be 'previous' or 'current', got {self.step_reference!r}")


def _is_pole(h) -> bool:
    return h != h or abs(h) == math.inf


def halley_step(problem: OdeProblem, x):
    h = problem.h(x)
    r = problem.r(x)
    return x - 2 * h / (2 + r * h * h)


def modified_halley_step(problem: OdeProblem, x, r0):
    if not r0 > 0:
        raise ValueError(f"frozen coefficient must be positive, got {r0}")
    h = problem.h(x)
    return x - 2 * h / (2 + r0 * h * h)


def _nudge(problem: OdeProblem, x):
    if isinstance(x, float):
        return math.nextafter(x, math.copysign(math.inf, problem.direction))
    return x + problem.direction * abs(x) * 2.0**-52


def _converged(x_prev, x_new, cfg: SweepConfig) -> bool:
    step = abs(x_new - x_prev)
    ref = abs(x_prev) if cfg.step_reference == "previous" else abs(x_new)
    return step == 0 or step < cfg.rel_step_tol * ref


def iterate_to_zero(problem: OdeProblem, x0, cfg: SweepConfig, zero_index: int = 0,
                    full_halley: bool = False) -> tuple[Any, IterationTrace]:
    """Iterate from x0 until the relative step drops below ``cfg.rel_step_tol``.

    Hitting the iteration cap is recorded in the trace, not raised.
    """
    if _is_pole(problem.ratio(x0)):
        x0 = _nudge(problem, x0)
    r0 = problem.r(x0)
    trace = IterationTrace(zero_index=zero_index, initial_guess=x0, iterates=[x0])
    x = x0
    while True:
        xn = halley_step(problem, x) if full_halley else modified_halley_step(problem, x, r0)
        trace.iterates.append(xn)
        if _converged(x, xn, cfg):
            return xn, trace
        if trace.iterations >= cfg.max_iters_per_zero:
            trace.termination = Termination.ITER_CAP_EXCEEDED
            return xn, trace
        x = xn


def in_convergence_side(problem: OdeProblem, h) -> bool:
    """True when h has the sign of the sub-interval just before the next zero
    in the march direction (h < 0 marching right, h > 0 marching left)."""
    if _is_pole(h):
        return False
    return h < 0 if problem.direction > 0 else h > 0


def sweep_map(problem: OdeProblem, x, h):
    """One application of t_j with j = sign(r'): x - (atan(w h) + j pi) / w."""
    ops = problem.ops
    w = ops.sqrt(problem.r(x))
    j = -problem.direction
    if _is_pole(h):
        angle = ops.pi / 2 if h > 0 else -ops.pi / 2
    else:
        angle = ops.atan(w * h)
    return x - (angle + j * ops.pi) / w


def sweep_guess(problem: OdeProblem, x, cfg: SweepConfig) -> tuple[Any, int]:
    """Move x forward until it sits on the convergence side of the next zero.

    Returns (point, number of t_j applications).  Raises DomainViolation when
    the sweep leaves the domain (no further zeros).
    """
    steps = 0
    h = problem.ratio(x)
    while not in_convergence_side(problem, h):
        if steps >= cfg.max_sweep_steps:
            raise SweepCapExceeded(f"no valid guess after {steps} sweep steps from {x}")
        x = sweep_map(problem, x, h)
        steps += 1
        if not problem.contains(x):
            raise DomainViolation(f"sweep left the domain at {x}")
        h = problem.ratio(x)
    return x, steps


def plan_next_guess(problem: OdeProblem, prev_zero):
    """prev_zero +- pi/sqrt(r(prev_zero)), in the march direction."""
    gap = problem.ops.pi / problem.ops.sqrt(problem.r(prev_zero))
    guess = prev_zero + problem.direction * gap
    if not problem.contains(guess):
        raise DomainViolation(f"planned guess {guess} outside {problem.domain}")
    return guess


def find_all_zeros(problem: OdeProblem, first_guess, cfg: SweepConfig, max_zeros: int | None = None,
                   needs_sweep: Callable[[Any], bool] | None = None,
                   full_halley: bool = False) -> tuple[list, list[IterationTrace]]:
    """March through the domain collecting zeros in the march direction.

    ``needs_sweep(guess)`` decides whether a planned guess goes through
    :func:`sweep_guess`; by default every guess is checked (a no-op when it
    already lies on the convergence side).
    """
    if not problem.contains(first_guess):
        raise DomainViolation(f"first guess {first_guess} outside {problem.domain}")
    zeros: list = []
    traces: list[IterationTrace] = []
    guess = first_guess
    while max_zeros is None or len(zeros) < max_zeros:
        steps = 0
        if needs_sweep is None or needs_sweep(guess):
            try:
                guess, steps = sweep_guess(problem, guess, cfg)
            except DomainViolation:
                break
        zero, trace = iterate_to_zero(problem, guess, cfg, zero_index=len(zeros), full_halley=full_halley)
        trace.sweep_steps = steps
        zeros.append(zero)
        traces.append(trace)
        try:
            guess = plan_next_guess(problem, zero)
        except DomainViolation:
            break
    return zeros, traces
