"""Gauss-Hermite rules (weight exp(-x^2) on the real line).

Positive nodes are the zeros of f(x) = exp(-x^2/2) H_n(x), which solves
f'' + (2n+1-x^2) f = 0.  They are marched left to right with the modified
Halley step; guesses beyond the point where r drops to a quarter of its value
at 0 are first swept into the convergence sub-interval.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import _march as M
from ._series import HERMITE as _K_HERMITE
from ._series_dd import node_derivatives
from .dd import two_prod, two_sum
from .errors import EnumerationIncomplete, NormalizationFailure, SweepCapExceeded
from .halley import OdeProblem, RTrend, SweepConfig, find_all_zeros
from .rule import Family, QuadratureRule, RuleStats, mirror, mirror_weights, traces_from_buffer
from .taylor import TaylorMarcher

SQRT_PI = 1.772453850905516  # correctly rounded; math.sqrt(math.pi) is one ulp low
DEFAULT_TOL = 1e-10
MAX_DEGREE = 10_000_000
# beyond this x^2 every weight underflows, so f' there need not be sharpened
_UNDERFLOW_X2 = 800.0

# Cody-Waite split of ln 2: LN2_HI has trailing zero bits so k * LN2_HI is exact
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10


class HermiteProblem:
    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"degree must be >= 1, got {n}")
        self.n = n
        self.big_l = 2 * n + 1
        self.domain_hi = math.sqrt(self.big_l)
        self.transition = math.sqrt(3.0) / 2.0 * self.domain_hi

    def r(self, x: float) -> float:
        return self.big_l - x * x

    def certified(self, x: float) -> bool:
        """Whether a guess at x is known to need no sweep (r(x) > r(0)/4)."""
        return self.r(x) > self.big_l / 4.0

    def ode_problem(self) -> OdeProblem:
        """Generic-engine view on (0, sqrt(2n+1)), driven by a fresh Taylor marcher."""
        marcher = TaylorMarcher(Family.HERMITE, self.n)
        return OdeProblem(marcher.ratio, self.r, RTrend.DECREASING, (0.0, self.domain_hi))


def first_guess_hermite(n: int) -> float:
    """pi/sqrt(2n+1) for odd n, half that for even n."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    w = math.sqrt(2.0 * n + 1.0)
    return math.pi / w if n % 2 else math.pi / (2.0 * w)


def default_config() -> SweepConfig:
    return SweepConfig(rel_step_tol=DEFAULT_TOL, step_reference="previous")


def find_positive_zeros(n: int, cfg: SweepConfig | None = None, full_halley: bool = False):
    """Positive zeros through the generic engine (slow reference path)."""
    cfg = cfg or default_config()
    prob = HermiteProblem(n)
    if n < 2:
        return [], []
    return find_all_zeros(
        prob.ode_problem(), first_guess_hermite(n), cfg, max_zeros=n // 2,
        needs_sweep=lambda g: not prob.certified(g), full_halley=full_halley,
    )


def _exp_neg(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """exp(-p) as (m, k) with exp(-p) = m * 2**-k, m in [1/sqrt2, sqrt2]."""
    k = np.rint(p / math.log(2.0))
    rem = (k * _LN2_HI - p) + k * _LN2_LO
    return np.exp(rem), k.astype(np.int64)


def hermite_weights(nodes, fprimes, n: int, node_lows=None) -> np.ndarray:
    """Weights of the full rule (ascending order) from the positive nodes.

    u_i = exp(-x_i^2) / f'(x_i)^2 is scaled so that the positive nodes carry
    sum w x^2 = sqrt(pi)/4; an odd rule's zero node gets sqrt(pi) - 2 sum w.
    ``node_lows`` (the rounding residue of each node) sharpens exp(-x^2).
    """
    x = np.asarray(nodes, dtype=np.float64)
    fp = np.asarray(fprimes, dtype=np.float64)
    if len(x) != len(fp):
        raise ValueError("nodes and fprimes differ in length")
    lows = np.zeros_like(x) if node_lows is None else np.asarray(node_lows, dtype=np.float64)
    if len(x) == 0:
        return np.array([SQRT_PI]) if n % 2 else np.zeros(0)
    # x^2 = p + delta exactly to double-double order
    p, e = two_prod(x, x)
    delta = e + 2.0 * x * lows
    m, k = _exp_neg(p)
    mant = m * np.exp(-delta) / (fp * fp)
    moment_terms = np.ldexp(mant * x * x, -k)
    total = math.fsum(moment_terms)
    if not total > 0.0 or not math.isfinite(total):
        raise NormalizationFailure(f"sum of u x^2 is {total}; cannot normalise Hermite weights")
    scale = SQRT_PI / 4.0 / total
    w = np.ldexp(scale * mant, -k)
    zero_weight = None
    if n % 2:
        zero_weight = SQRT_PI - 2.0 * math.fsum(w)
    return mirror_weights(w, zero_weight)


def polish(n: int, nodes: np.ndarray, lows: np.ndarray, fps: np.ndarray):
    """Correctly rounded nodes, their residues and f' from a double-double march.

    The double march's (f, f') drift by about one rounding per hop, which after
    thousands of hops caps weight accuracy near 1e-13.  Carrying the state in
    double-double from node to node and applying one Newton correction -f/f'
    fixes both.  Nodes whose weights underflow keep the march values.
    """
    nodes = np.array(nodes, dtype=np.float64)
    lows = np.array(lows, dtype=np.float64)
    fps = np.array(fps, dtype=np.float64)
    m = int(np.searchsorted(nodes, math.sqrt(_UNDERFLOW_X2)))
    if m:
        f0, f1 = (0.0, 1.0) if n % 2 else (1.0, 0.0)
        f, hi, lo, ok = node_derivatives(_K_HERMITE, n, np.ascontiguousarray(nodes[:m]), f0, f1)
        nodes[:m], lows[:m] = two_sum(nodes[:m], -f / hi)
        fps[:m] = hi
    return nodes, lows, fps


def compute_hermite_rule(n: int, cfg: SweepConfig | None = None, scheme: str = "modified",
                         record_traces: bool = False) -> QuadratureRule:
    """All n nodes and weights of the Gauss-Hermite rule."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree must be <= {MAX_DEGREE}, got {n}")
    if scheme not in ("modified", "halley"):
        raise ValueError(f"scheme must be 'modified' or 'halley', got {scheme!r}")
    cfg = cfg or default_config()
    full = scheme == "halley"
    t0 = time.perf_counter()
    nodes, lows, fps, iters, sweeps, flags, trace, status = M.hermite_march(
        n, cfg.rel_step_tol, cfg.max_iters_per_zero, cfg.max_sweep_steps, full, record_traces
    )
    if status == M.SWEEP_CAP:
        raise SweepCapExceeded(f"hermite n={n}: sweep cap hit after {len(nodes)} zeros")
    if status != M.OK or len(nodes) != n // 2:
        raise EnumerationIncomplete(f"hermite n={n}: found {len(nodes)} positive zeros, expected {n // 2}")
    nodes, lows, fps = polish(n, nodes, lows, fps)
    weights = hermite_weights(nodes, fps, n, lows)
    all_nodes = mirror(nodes, n % 2 == 1)
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
    return QuadratureRule(Family.HERMITE, n, all_nodes, weights, per_node, stats, traces)
