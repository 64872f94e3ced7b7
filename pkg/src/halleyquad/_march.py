"""Whole-rule march kernels (positive zeros only).

Both marches keep one Taylor centre.  Every evaluation at a new point x
re-centres there (so f, f' are always known at the centre), which is the
bookkeeping of the published algorithm: the guess for zero k+1 is evaluated
from the centre left by the last-but-one iterate of zero k.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import kernel
from ._series import HERMITE, LEGENDRE, advance, family_cap, family_tol, hop, local_scale
from .dd import two_sum

OK = 0
INCOMPLETE = 1
SWEEP_CAP = 2

FLAG_ITER_CAP = 1
FLAG_TRUNCATION = 2


@kernel
def _ratio(f, fp):
    if fp == 0.0 or abs(fp) < 1e-300 * abs(f):
        return math.inf if f >= 0.0 else -math.inf
    return f / fp


@kernel
def hermite_march(n, tol, max_iter, max_sweep, full_halley, record):
    """Positive zeros of exp(-x^2/2) H_n(x) by the modified (or full) Halley march.

    Returns nodes, node low parts, f'(nodes), iteration counts, sweep counts,
    per-node flags, recorded iterates (or a 1x1 dummy), status.
    """
    m = n // 2
    nodes = np.zeros(m)
    lows = np.zeros(m)
    fps = np.zeros(m)
    iters = np.zeros(m, dtype=np.int64)
    sweeps = np.zeros(m, dtype=np.int64)
    flags = np.zeros(m, dtype=np.int64)
    if record:
        trace = np.full((max(m, 1), max_iter + 1), np.nan)
    else:
        trace = np.full((1, 1), np.nan)
    buf = np.zeros(family_cap(HERMITE) + 3)

    big_l = 2.0 * n + 1.0
    r_cert = big_l / 4.0
    x_hi = math.sqrt(big_l)
    c = 0.0
    if n % 2 == 1:
        cf, cfp = 0.0, 1.0
        guess = math.pi / math.sqrt(big_l)
    else:
        cf, cfp = 1.0, 0.0
        guess = math.pi / (2.0 * math.sqrt(big_l))

    status = OK
    count = 0
    while count < m:
        if guess >= x_hi:
            status = INCOMPLETE
            break
        flag = 0
        cf, cfp, ok, _ = advance(HERMITE, n, c, cf, cfp, guess, buf)
        c = guess
        if not ok:
            flag |= FLAG_TRUNCATION
        nsw = 0
        if big_l - guess * guess <= r_cert:
            # uncertified: sweep with t_{-1} until h < 0
            while _ratio(cf, cfp) >= 0.0:
                if nsw >= max_sweep:
                    status = SWEEP_CAP
                    break
                w = math.sqrt(big_l - guess * guess)
                guess = guess - (math.atan(w * _ratio(cf, cfp)) - math.pi) / w
                nsw += 1
                if guess >= x_hi:
                    status = INCOMPLETE
                    break
                cf, cfp, ok, _ = advance(HERMITE, n, c, cf, cfp, guess, buf)
                c = guess
                if not ok:
                    flag |= FLAG_TRUNCATION
            if status != OK:
                break
        r0 = big_l - guess * guess
        x = guess
        it = 0
        if record:
            trace[count, 0] = x
        while True:
            h = _ratio(cf, cfp)
            rr = big_l - x * x if full_halley else r0
            step = 2.0 * h / (2.0 + rr * h * h)
            xn = x - step
            it += 1
            if record:
                trace[count, it] = xn
            if abs(xn - x) < tol * abs(x):
                break
            if it >= max_iter:
                flag |= FLAG_ITER_CAP
                break
            cf, cfp, ok, _ = advance(HERMITE, n, c, cf, cfp, xn, buf)
            c = xn
            if not ok:
                flag |= FLAG_TRUNCATION
            x = xn
        node, lo = two_sum(x, -step)
        # f' at the zero from the centre x; f' is stationary there since f'' = -r f = 0
        _, fpn, ok = hop(HERMITE, n, c, cf, cfp, -step, buf)
        if not ok:
            flag |= FLAG_TRUNCATION
        nodes[count] = node
        lows[count] = lo
        fps[count] = fpn
        iters[count] = it
        sweeps[count] = nsw
        flags[count] = flag
        count += 1
        rn = big_l - node * node
        if rn <= 0.0:
            guess = x_hi
        else:
            guess = node + math.pi / math.sqrt(rn)
    return nodes[:count], lows[:count], fps[:count], iters[:count], sweeps[:count], flags[:count], trace, status


@kernel
def _b_ratio(x, f, fp):
    """Transformed ratio b = f / ((1-x^2) f' + x f)."""
    den = (1.0 - x) * (1.0 + x) * fp + x * f
    if den == 0.0 or abs(den) < 1e-300 * abs(f):
        return math.inf if f >= 0.0 else -math.inf
    return f / den


@kernel
def legendre_march(n, tol, max_iter, max_sweep, full_halley, record):
    """Positive zeros of sqrt(1-x^2) P_n(x) by the tanh-transformed modified Halley march."""
    m = n // 2
    nodes = np.zeros(m)
    fps = np.zeros(m)
    iters = np.zeros(m, dtype=np.int64)
    sweeps = np.zeros(m, dtype=np.int64)
    flags = np.zeros(m, dtype=np.int64)
    if record:
        trace = np.full((max(m, 1), max_iter + 1), np.nan)
    else:
        trace = np.full((1, 1), np.nan)
    buf = np.zeros(family_cap(LEGENDRE) + 3)

    kk = float(n) * (n + 1.0)  # k(0) = (L^2 - 1)/4
    edge = 4.0 * 2.220446049250313e-16
    c = 0.0
    if n % 2 == 1:
        cf, cfp = 0.0, 1.0
        guess = math.tanh(math.pi / math.sqrt(kk))
    else:
        cf, cfp = 1.0, 0.0
        guess = math.tanh(math.pi / (2.0 * math.sqrt(kk)))

    status = OK
    count = 0
    while count < m:
        if 1.0 - guess < edge:
            status = INCOMPLETE
            break
        flag = 0
        cf, cfp, ok, _ = advance(LEGENDRE, n, c, cf, cfp, guess, buf)
        c = guess
        if not ok:
            flag |= FLAG_TRUNCATION
        b = _b_ratio(guess, cf, cfp)
        nsw = 0
        while b >= 0.0:
            if nsw >= max_sweep:
                status = SWEEP_CAP
                break
            kx = kk * (1.0 - guess) * (1.0 + guess)
            w = math.sqrt(kx)
            th = math.tanh((math.atan(w * b) - math.pi) / w)
            guess = (guess - th) / (1.0 - guess * th)
            nsw += 1
            if 1.0 - guess < edge:
                status = INCOMPLETE
                break
            cf, cfp, ok, _ = advance(LEGENDRE, n, c, cf, cfp, guess, buf)
            c = guess
            if not ok:
                flag |= FLAG_TRUNCATION
            b = _b_ratio(guess, cf, cfp)
        if status != OK:
            break
        k0 = kk * (1.0 - guess) * (1.0 + guess)
        x = guess
        it = 0
        if record:
            trace[count, 0] = x
        while True:
            kx = kk * (1.0 - x) * (1.0 + x) if full_halley else k0
            bb = 2.0 * b / (2.0 + kx * b * b)
            th = math.tanh(bb)
            xn = (x - th) / (1.0 - x * th)
            it += 1
            if record:
                trace[count, it] = xn
            if abs(xn - x) < tol * abs(xn):
                break
            if it >= max_iter:
                flag |= FLAG_ITER_CAP
                break
            cf, cfp, ok, _ = advance(LEGENDRE, n, c, cf, cfp, xn, buf)
            c = xn
            if not ok:
                flag |= FLAG_TRUNCATION
            b = _b_ratio(xn, cf, cfp)
            x = xn
        _, fpn, ok = hop(LEGENDRE, n, c, cf, cfp, xn - x, buf)
        if not ok:
            flag |= FLAG_TRUNCATION
        nodes[count] = xn
        fps[count] = fpn
        iters[count] = it
        sweeps[count] = nsw
        flags[count] = flag
        count += 1
        tau = math.tanh(math.pi / math.sqrt(kk * (1.0 - xn) * (1.0 + xn)))
        guess = (xn + tau) / (1.0 + xn * tau)
    return nodes[:count], fps[:count], iters[:count], sweeps[:count], flags[:count], trace, status
