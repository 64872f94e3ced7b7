"""Three-term recurrence kernels for the reference oracle.

A table ``(a_k, b_k)`` drives ``p_{k+1} = a_k x p_k - b_k p_{k-1}`` from
``p_{-1} = 0, p_0 = 1``.  Every eighth step values past 2**500 are rescaled by
2**-500 (eight steps cannot grow them anywhere near overflow); the count of rescalings is returned as ``e`` (true value = p * 2**(500 e)).

Kinds: HERMITE_ON (orthonormal Hermite), HERMITE_CLASSIC (physicists' H_n),
LEGENDRE (P_n).  The evaluation kernels are elementwise and accept scalars or
arrays; the batch drivers exist twice, as numba loops and as NumPy code.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import USE_NUMBA, kernel
from .dd import dd_div, dd_mul, dd_mul_d, dd_sqrt, dd_sub, dd_add_d

HERMITE_ON = 0
HERMITE_CLASSIC = 1
LEGENDRE = 2

BIG = 2.0**500
TINY = 2.0**-500
RESCALE_BITS = 500
DOUBLE_STOP = 1e-12


@kernel
def recurrence_table(kind, n):
    """DD coefficient arrays (ah, al, bh, bl) of length max(n, 1)."""
    m = max(n, 1)
    ah = np.zeros(m)
    al = np.zeros(m)
    bh = np.zeros(m)
    bl = np.zeros(m)
    for k in range(m):
        if kind == LEGENDRE:
            ah[k], al[k] = dd_div(2.0 * k + 1.0, 0.0, k + 1.0, 0.0)
            bh[k], bl[k] = dd_div(float(k), 0.0, k + 1.0, 0.0)
        elif kind == HERMITE_CLASSIC:
            ah[k] = 2.0
            bh[k] = 2.0 * k
        else:
            qh, ql = dd_div(2.0, 0.0, k + 1.0, 0.0)
            ah[k], al[k] = dd_sqrt(qh, ql)
            if k > 0:
                qh, ql = dd_div(float(k), 0.0, k + 1.0, 0.0)
                bh[k], bl[k] = dd_sqrt(qh, ql)
    return ah, al, bh, bl


@kernel
def three_term(n, x, ah, bh):
    """Double-precision (p_n, p_{n-1}, e)."""
    p = x * 0.0 + 1.0
    q = x * 0.0
    e = x * 0.0
    for k in range(n):
        t = ah[k] * x * p - bh[k] * q
        q = p
        p = t
        if k & 7 == 7:
            big = np.abs(p) > BIG
            sc = TINY * big + (1.0 - big)
            p = p * sc
            q = q * sc
            e = e + big
    return p, q, e


@kernel
def three_term_dd(n, xh, xl, ah, al, bh, bl):
    """Double-double (p_n hi/lo, p_{n-1} hi/lo, e)."""
    ph = xh * 0.0 + 1.0
    pl = xh * 0.0
    qh = xh * 0.0
    ql = xh * 0.0
    e = xh * 0.0
    for k in range(n):
        uh, ul = dd_mul(xh, xl, ph, pl)
        uh, ul = dd_mul(uh, ul, ah[k], al[k])
        vh, vl = dd_mul(qh, ql, bh[k], bl[k])
        th, tl = dd_sub(uh, ul, vh, vl)
        qh, ql = ph, pl
        ph, pl = th, tl
        if k & 7 == 7:
            big = np.abs(ph) > BIG
            sc = TINY * big + (1.0 - big)
            ph = ph * sc
            pl = pl * sc
            qh = qh * sc
            ql = ql * sc
            e = e + big
    return ph, pl, qh, ql, e


@kernel
def derivative(kind, n, x, p, q):
    """p_n' from (p_n, p_{n-1}), same scaling.  Legendre needs |x| < 1."""
    if kind == HERMITE_ON:
        return math.sqrt(2.0 * n) * q
    if kind == HERMITE_CLASSIC:
        return 2.0 * n * q
    return n * (x * p - q) / ((x - 1.0) * (x + 1.0))


@kernel
def derivative_dd(kind, n, xh, xl, ph, pl, qh, ql):
    if kind == HERMITE_ON:
        ch, cl = dd_sqrt(2.0 * n, 0.0)
        return dd_mul(qh, ql, ch, cl)
    if kind == HERMITE_CLASSIC:
        return dd_mul_d(qh, ql, 2.0 * n)
    uh, ul = dd_mul(xh, xl, ph, pl)
    uh, ul = dd_sub(uh, ul, qh, ql)
    uh, ul = dd_mul_d(uh, ul, float(n))
    dh, dl = dd_add_d(xh, xl, -1.0)
    sh, sl = dd_add_d(xh, xl, 1.0)
    dh, dl = dd_mul(dh, dl, sh, sl)
    return dd_div(uh, ul, dh, dl)


@kernel
def dd_newton(kind, n, xh, xl, ah, al, bh, bl):
    ph, pl, qh, ql, e = three_term_dd(n, xh, xl, ah, al, bh, bl)
    dh, dl = derivative_dd(kind, n, xh, xl, ph, pl, qh, ql)
    sh, sl = dd_div(ph, pl, dh, dl)
    return dd_sub(xh, xl, sh, sl)


def _grid_hermite(n: int) -> np.ndarray:
    big_l = 2.0 * n + 1.0
    end = math.sqrt(big_l) + 1.0
    g = 0.5 * math.pi / math.sqrt(big_l) if n % 2 else 0.0
    pts = [g]
    while g < end:
        r = big_l - g * g
        # half the lower bound on the zero gap to the right of g
        step = 0.5 * math.pi / math.sqrt(r) if r > 0.0 else end
        g = min(g + step, end)
        pts.append(g)
    return np.array(pts)


def _grid_legendre(n: int) -> np.ndarray:
    kk = math.sqrt(n * (n + 1.0))
    z = 0.5 * math.pi / kk if n % 2 else 0.0
    pts = [math.tanh(z)]
    while pts[-1] < 1.0:
        z += 0.5 * math.pi * math.cosh(z) / kk
        pts.append(min(math.tanh(z), 1.0))
    return np.array(pts)


def sign_grid(kind: int, n: int) -> np.ndarray:
    return _grid_legendre(n) if kind == LEGENDRE else _grid_hermite(n)


def _endpoint_values(kind, n, xs, ah, bh):
    p, q, e = three_term(n, xs, ah, bh)
    if kind == LEGENDRE:
        p = np.where(xs >= 1.0, 1.0, p)
    return p


@kernel
def _newton_bracket(kind, n, a, b, fa, ah, bh):
    """Safeguarded Newton in double on a sign-change bracket."""
    x = 0.5 * (a + b)
    for _ in range(200):
        p, q, e = three_term(n, x, ah, bh)
        if p == 0.0:
            return x
        if (p > 0.0) == (fa > 0.0):
            a = x
        else:
            b = x
        d = derivative(kind, n, x, p, q)
        xn = x - p / d if d != 0.0 else 0.5 * (a + b)
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        # rounding noise in p_n sits near n*eps; the DD polish does the rest
        if abs(xn - x) <= DOUBLE_STOP * abs(x) or b - a <= 4e-16 * abs(x):
            return xn
        x = xn
    return x


@kernel
def _refine_loop(kind, n, lo, hi, flo, ah, al, bh, bl, dd_steps):
    m = lo.shape[0]
    outh = np.zeros(m)
    outl = np.zeros(m)
    for i in range(m):
        xh = _newton_bracket(kind, n, lo[i], hi[i], flo[i], ah, bh)
        xl = 0.0
        for _ in range(dd_steps):
            xh, xl = dd_newton(kind, n, xh, xl, ah, al, bh, bl)
        outh[i] = xh
        outl[i] = xl
    return outh, outl


def _refine_vec(kind, n, lo, hi, flo, ah, al, bh, bl, dd_steps):
    a = lo.copy()
    b = hi.copy()
    pos = flo > 0.0
    x = 0.5 * (a + b)
    active = np.ones(len(x), dtype=bool)
    for _ in range(200):
        if not active.any():
            break
        p, q, e = three_term(n, x, ah, bh)
        same = (p > 0.0) == pos
        a = np.where(active & same, x, a)
        b = np.where(active & ~same, x, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - p / derivative(kind, n, x, p, q)
        bad = ~((a < xn) & (xn < b))
        xn = np.where(bad, 0.5 * (a + b), xn)
        done = (p == 0.0) | (np.abs(xn - x) <= DOUBLE_STOP * np.abs(x)) | (b - a <= 4e-16 * np.abs(x))
        xn = np.where(p == 0.0, x, xn)
        x = np.where(active, xn, x)
        active &= ~done
    xh, xl = x, np.zeros_like(x)
    for _ in range(dd_steps):
        xh, xl = dd_newton(kind, n, xh, xl, ah, al, bh, bl)
    return xh, xl


def refine_brackets(kind, n, lo, hi, flo, table, dd_steps=3):
    ah, al, bh, bl = table
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    flo = np.ascontiguousarray(flo, dtype=np.float64)
    if USE_NUMBA:
        return _refine_loop(kind, n, lo, hi, flo, ah, al, bh, bl, dd_steps)
    return _refine_vec(kind, n, lo, hi, flo, ah, al, bh, bl, dd_steps)


def bracket_zeros(kind: int, n: int, table) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sign-change cells (lo, hi, f(lo)) of p_n on the positive axis."""
    ah, al, bh, bl = table
    xs = sign_grid(kind, n)
    f = _endpoint_values(kind, n, xs, ah, bh)
    s = np.where(f >= 0.0, 1.0, -1.0)
    change = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return xs[change], xs[change + 1], f[change]


def dd_newton_many(kind, n, xh, xl, table, steps):
    ah, al, bh, bl = table
    xh = np.ascontiguousarray(xh, dtype=np.float64)
    xl = np.ascontiguousarray(xl, dtype=np.float64)
    for _ in range(steps):
        xh, xl = dd_newton(kind, n, xh, xl, ah, al, bh, bl)
    return xh, xl


def eval_many(kind, n, xh, xl, table):
    ah, al, bh, bl = table
    xh = np.ascontiguousarray(xh, dtype=np.float64)
    xl = np.ascontiguousarray(xl, dtype=np.float64)
    ph, pl, qh, ql, e = three_term_dd(n, xh, xl, ah, al, bh, bl)
    return ph, pl, qh, ql, e
