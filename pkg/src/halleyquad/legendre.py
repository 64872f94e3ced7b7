"""Gauss-Legendre rules (weight 1 on [-1, 1]).

Positive nodes are the zeros of f(x) = sqrt(1-x^2) P_n(x).  Under x = tanh z
the Legendre equation becomes Y'' + n(n+1) sech^2(z) Y = 0 with no first-order
term, which spreads the nodes clustered at x = 1.  All z-space formulas are
carried out in x through tanh addition, so arctanh is never evaluated:

    b(x) = f / ((1-x^2) f' + x f)         the z-space ratio Y/Y'
    k(x) = n(n+1) (1-x^2)                 the z-space coefficient
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import _march as M
from ._series import LEGENDRE as _K_LEGENDRE
from ._series_dd import node_derivatives
from .errors import (DomainViolation, EnumerationIncomplete, NormalizationFailure, PoleEncountered,
                     SweepCapExceeded)
from .halley import OdeProblem, RTrend, SweepConfig, find_all_zeros
from .rule import Family, QuadratureRule, RuleStats, mirror, mirror_weights, traces_from_buffer
from .taylor import TaylorMarcher

DEFAULT_TOL = 1e-15
MAX_DEGREE = 10_000_000
EDGE = 4.0 * 2.220446049250313e-16


class LegendreProblem:
    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"degree must be >= 1, got {n}")
        self.n = n
        self.big_l = 2 * n + 1
        self.k0 = n * (n + 1.0)  # (L^2 - 1) / 4
        self.marcher = TaylorMarcher(Family.LEGENDRE, n)

    def r(self, x: float) -> float:
        w1 = (1.0 - x) * (1.0 + x)
        return ((self.big_l**2 - 1.0) * w1 + 4.0) / (4.0 * w1 * w1)

    def k(self, x: float) -> float:
        return self.k0 * (1.0 - x) * (1.0 + x)

    def b(self, x: float) -> float:
        """Transformed ratio at x (re-centres the marcher there)."""
        return self.marcher.b_ratio(x)

    def z_problem(self) -> OdeProblem:
        """Generic-engine view in z = arctanh x, for cross-checks only."""
        marcher = TaylorMarcher(Family.LEGENDRE, self.n)
        k0 = self.k0
        return OdeProblem(
            lambda z: marcher.b_ratio(math.tanh(z)),
            lambda z: k0 / math.cosh(z) ** 2,
            RTrend.DECREASING,
            (0.0, math.atanh(1.0 - EDGE)),
        )


def legendre_first_guess(n: int) -> float:
    """tanh(pi/sqrt(k(0))) for odd n, tanh(pi/(2 sqrt(k(0)))) for even n."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    w = math.sqrt(n * (n + 1.0))
    return math.tanh(math.pi / w) if n % 2 else math.tanh(math.pi / (2.0 * w))


def default_config() -> SweepConfig:
    return SweepConfig(rel_step_tol=DEFAULT_TOL, step_reference="current")


def _is_pole(b: float) -> bool:
    return not math.isfinite(b)


def transformed_step(prob: LegendreProblem, x: float, k0: float) -> float:
    """One modified Halley step taken in z and mapped back to x."""
    if not abs(x) < 1.0:
        raise DomainViolation(f"|x| must be < 1, got {x}")
    b = prob.b(x)
    if _is_pole(b):
        raise PoleEncountered(f"transformed ratio has a pole at {x}")
    th = math.tanh(2.0 * b / (2.0 + k0 * b * b))
    return (x - th) / (1.0 - x * th)


def sweep_once(prob: LegendreProblem, x: float, b: float) -> float:
    """tanh(z - T(z)) with T = (atan(sqrt(k) b) - pi) / sqrt(k)."""
    w = math.sqrt(prob.k(x))
    angle = math.copysign(math.pi / 2.0, b) if _is_pole(b) else math.atan(w * b)
    th = math.tanh((angle - math.pi) / w)
    return (x - th) / (1.0 - x * th)


def transformed_sweep(prob: LegendreProblem, x: float, cfg: SweepConfig | None = None) -> tuple[float, int]:
    """Sweep until b < 0; returns (point, steps)."""
    cap = (cfg or default_config()).max_sweep_steps
    steps = 0
    b = prob.b(x)
    while _is_pole(b) or b >= 0.0:
        if steps >= cap:
            raise SweepCapExceeded(f"b still >= 0 after {steps} sweep steps")
        x = sweep_once(prob, x, b)
        steps += 1
        if 1.0 - x < EDGE:
            raise DomainViolation(f"sweep reached the endpoint from below ({x})")
        b = prob.b(x)
    return x, steps


def find_positive_zeros_z(n: int, cfg: SweepConfig | None = None):
    """Positive zeros via the generic engine in z (slow reference path)."""
    cfg = cfg or default_config()
    if n < 2:
        return [], []
    prob = LegendreProblem(n)
    zs, traces = find_all_zeros(prob.z_problem(), math.atanh(legendre_first_guess(n)), cfg, max_zeros=n // 2)
    return [math.tanh(z) for z in zs], traces


def legendre_weights(nodes, fprimes, n: int, zero_fprime: float = 1.0) -> np.ndarray:
    """Full-rule weights (ascending) proportional to 1/f'^2, summing to 2.

    ``nodes``/``fprimes`` describe the positive nodes; for odd n the zero node
    uses ``zero_fprime`` (1 with the standard seed).
    """
    x = np.asarray(nodes, dtype=np.float64)
    fp = np.asarray(fprimes, dtype=np.float64)
    if len(x) != len(fp):
        raise ValueError("nodes and fprimes differ in length")
    u = 1.0 / (fp * fp)
    u0 = 1.0 / (zero_fprime * zero_fprime) if n % 2 else 0.0
    total = 2.0 * math.fsum(u) + u0
    if not total > 0.0 or not math.isfinite(total):
        raise NormalizationFailure(f"sum of 1/f'^2 is {total}; cannot normalise Legendre weights")
    scale = 2.0 / total
    return mirror_weights(scale * u, scale * u0 if n % 2 else None)


def polish(n: int, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Correctly rounded nodes and f' there, from a double-double march.

    Same remedy as for Hermite: the double march's drift would otherwise limit
    the weights to ~1e-13 relative.
    """
    nodes = np.array(nodes, dtype=np.float64)
    if len(nodes) == 0:
        return nodes, np.zeros(0)
    f0, f1 = (0.0, 1.0) if n % 2 else (1.0, 0.0)
    f, hi, lo, ok = node_derivatives(_K_LEGENDRE, n, np.ascontiguousarray(nodes), f0, f1)
    return nodes - f / hi, hi


def compute_legendre_rule(n: int, cfg: SweepConfig | None = None, scheme: str = "modified",
                          record_traces: bool = False) -> QuadratureRule:
    """All n nodes and weights of the Gauss-Legendre rule."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree must be <= {MAX_DEGREE}, got {n}")
    if scheme not in ("modified", "halley"):
        raise ValueError(f"scheme must be 'modified' or 'halley', got {scheme!r}")
    cfg = cfg or default_config()
    full = scheme == "halley"
    t0 = time.perf_counter()
    nodes, fps, iters, sweeps, flags, trace, status = M.legendre_march(
        n, cfg.rel_step_tol, cfg.max_iters_per_zero, cfg.max_sweep_steps, full, record_traces
    )
    if status == M.SWEEP_CAP:
        raise SweepCapExceeded(f"legendre n={n}: sweep cap hit after {len(nodes)} zeros")
    if status != M.OK or 2 * len(nodes) + n % 2 != n:
        found = 2 * len(nodes) + n % 2
        raise EnumerationIncomplete(f"legendre n={n}: enumerated {found} nodes, expected {n}")
    nodes, fps = polish(n, nodes)
    all_nodes = mirror(nodes, n % 2 == 1)
    weights = legendre_weights(nodes, fps, n)
    per_node = mirror_weights(iters.astype(np.float64), 0.0 if n % 2 else None).astype(np.int64)
    total = int(iters.sum())
    nsweep = int(sweeps.sum())
    stats = RuleStats(
        total_iters=total,
        sweep_steps=nsweep,
        r_evals=(total if full else len(nodes)) + nsweep,
        positive_zeros=len(nodes),
        truncation_flags=int(np.count_nonzero(flags & M.FLAG_TRUNCATION)),
        iter_cap_flags=int(np.count_nonzero(flags & M.FLAG_ITER_CAP)),
        scheme=scheme,
        wall_time_s=time.perf_counter() - t0,
    )
    traces = traces_from_buffer(trace, iters, sweeps, flags, M.FLAG_ITER_CAP) if record_traces else None
    return QuadratureRule(Family.LEGENDRE, n, all_nodes, weights, per_node, stats, traces)
