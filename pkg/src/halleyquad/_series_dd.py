"""Double-double Taylor stepping, used to carry f' from node to node for weights.

Same scaled recurrences as the double kernels, with every coefficient, the
displacement and the running (f, f') held as hi/lo pairs.  Centres are plain
doubles (the nodes' leading parts), so recurrence inputs stay exact.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import kernel
from ._series import HERMITE, local_scale, max_hop
from .dd import dd_add, dd_add_d, dd_div, dd_mul, dd_mul_d, two_prod, two_sum

DD_CAP = 150
DD_TOL = 1e-33


@kernel
def _pow2_floor(v):
    # power of two <= v, so scaling by it is exact
    m, e = math.frexp(v)
    return math.ldexp(0.5, e)


@kernel
def _recurrence_consts(family, n, x0, s):
    """Per-centre constants of the scaled recurrence, as hi/lo pairs (10 values)."""
    c = np.zeros(10)
    if family == HERMITE:
        ph, pl = two_prod(x0, x0)
        rh, rl = dd_add_d(-ph, -pl, 2.0 * n + 1.0)
        s2 = s * s
        c[0] = rh * s2
        c[1] = rl * s2
        c[2] = 2.0 * x0 * s2 * s  # exact: power-of-two scaling
        c[3] = s2 * s2
        return c
    # w1 = (1 - x0)(1 + x0)
    ah, al = two_sum(1.0, -x0)
    bh, bl = two_sum(1.0, x0)
    wh, wl = dd_mul(ah, al, bh, bl)
    kc = 4.0 * n * n + 4.0 * n
    c[0], c[1] = dd_mul(wh, wl, wh, wl)
    c[0] *= 4.0
    c[1] *= 4.0  # d0 = 4 w1^2
    c[2], c[3] = dd_mul_d(wh, wl, -16.0 * x0)  # d1 = -16 x0 w1
    ph, pl = two_prod(x0, x0)
    c[4], c[5] = dd_mul_d(ph, pl, 48.0)
    c[4], c[5] = dd_add_d(c[4], c[5], -16.0)  # d2 = 48 x0^2 - 16
    c[6], c[7] = dd_mul_d(wh, wl, kc)
    c[6], c[7] = dd_add_d(c[6], c[7], 4.0)  # e0 = kc w1 + 4
    c[8], c[9] = two_prod(-2.0 * kc, x0)  # e1 = -2 kc x0
    return c


@kernel
def _next_dd(family, n, x0, s, c, ah, al, j):
    """a[j+2] from a[j+1..j-2] (hi/lo arrays)."""
    zh = 0.0
    aj_h, aj_l = ah[j], al[j]
    a1_h = ah[j - 1] if j >= 1 else zh
    a1_l = al[j - 1] if j >= 1 else zh
    a2_h = ah[j - 2] if j >= 2 else zh
    a2_l = al[j - 2] if j >= 2 else zh
    if family == HERMITE:
        th, tl = dd_mul(c[0], c[1], aj_h, aj_l)
        uh, ul = dd_mul_d(a1_h, a1_l, c[2])
        vh, vl = dd_mul_d(a2_h, a2_l, c[3])
        uh, ul = dd_add(uh, ul, vh, vl)
        uh, ul = dd_add(uh, ul, -th, -tl)
        return dd_div(uh, ul, (j + 2.0) * (j + 1.0), 0.0)
    jf = float(j)
    s2 = s * s
    kc = 4.0 * n * n + 4.0 * n
    # c1 s a_{j+1}
    th, tl = dd_mul_d(c[2], c[3], (jf + 1.0) * jf * s)
    acc_h, acc_l = dd_mul(th, tl, ah[j + 1], al[j + 1])
    # (j(j-1)/2 d2 + e0) s^2 a_j
    th, tl = dd_mul_d(c[4], c[5], 0.5 * jf * (jf - 1.0))
    th, tl = dd_add(th, tl, c[6], c[7])
    th, tl = dd_mul(th * s2, tl * s2, aj_h, aj_l)
    acc_h, acc_l = dd_add(acc_h, acc_l, th, tl)
    # (16 (j-1)(j-2) x0 + e1) s^3 a_{j-1}
    th, tl = two_prod(16.0 * (jf - 1.0) * (jf - 2.0), x0)
    th, tl = dd_add(th, tl, c[8], c[9])
    th, tl = dd_mul(th * s2 * s, tl * s2 * s, a1_h, a1_l)
    acc_h, acc_l = dd_add(acc_h, acc_l, th, tl)
    # (4 (j-2)(j-3) - kc) s^4 a_{j-2}
    th, tl = dd_mul_d(a2_h, a2_l, (4.0 * (jf - 2.0) * (jf - 3.0) - kc) * s2 * s2)
    acc_h, acc_l = dd_add(acc_h, acc_l, th, tl)
    dh, dl = dd_mul_d(c[0], c[1], -(jf + 2.0) * (jf + 1.0))
    return dd_div(acc_h, acc_l, dh, dl)


@kernel
def hop_dd(family, n, x0, fh, fl, gh, gl, th, tl, ah, al):
    """(f, f') at x0 + t, everything in hi/lo pairs.  Returns (fh, fl, gh, gl, ok)."""
    s = _pow2_floor(local_scale(family, n, x0))
    c = _recurrence_consts(family, n, x0, s)
    ah[0], al[0] = fh, fl
    ah[1], al[1] = gh * s, gl * s
    tau_h, tau_l = th / s, tl / s
    sf_h, sf_l = fh, fl
    sg_h, sg_l = ah[1], al[1]
    ph, pl = 1.0, 0.0
    quiet = 0
    for k in range(1, DD_CAP + 1):
        ah[k + 1], al[k + 1] = _next_dd(family, n, x0, s, c, ah, al, k - 1)
        ph, pl = dd_mul(ph, pl, tau_h, tau_l)
        uh, ul = dd_mul(ah[k], al[k], ph, pl)
        vh, vl = dd_mul(ah[k + 1], al[k + 1], ph, pl)
        vh, vl = dd_mul_d(vh, vl, k + 1.0)
        sf_h, sf_l = dd_add(sf_h, sf_l, uh, ul)
        sg_h, sg_l = dd_add(sg_h, sg_l, vh, vl)
        if abs(uh) + abs(vh) < DD_TOL * (abs(sf_h) + abs(sg_h)):
            quiet += 1
            if quiet >= 2:
                return sf_h, sf_l, sg_h / s, sg_l / s, True
        else:
            quiet = 0
    return sf_h, sf_l, sg_h / s, sg_l / s, False


@kernel
def node_derivatives(family, n, nodes, f0, f1):
    """f and f' at each (ascending, positive) node, marching from 0 with seed (f0, f1).

    Returns (f, fp_hi, fp_lo, ok_all); f is rounded to double.
    """
    m = nodes.shape[0]
    out_f = np.zeros(m)
    out_h = np.zeros(m)
    out_l = np.zeros(m)
    ah = np.zeros(DD_CAP + 3)
    al = np.zeros(DD_CAP + 3)
    x0 = 0.0
    fh, fl, gh, gl = f0, 0.0, f1, 0.0
    ok_all = True
    for i in range(m):
        target = nodes[i]
        while True:
            mh = max_hop(family, n, x0)
            if abs(target - x0) <= mh:
                xn = target
            else:
                xn = x0 + mh
            th, tl = two_sum(xn, -x0)
            fh, fl, gh, gl, ok = hop_dd(family, n, x0, fh, fl, gh, gl, th, tl, ah, al)
            ok_all = ok_all and ok
            x0 = xn
            if xn == target:
                break
        out_f[i] = fh + fl
        out_h[i] = gh
        out_l[i] = gl
    return out_f, out_h, out_l, ok_all
