"""Taylor-series kernels for the Hermite and Legendre normal forms.

Coefficients are kept *scaled*: ``a[j] = c_j * s**j`` with ``c_j = f^(j)(x0)/j!``
and ``s`` a local length (wavelength, or distance to the x = +-1 singularity for
Legendre).  Scaled
coefficients stay O(1) where raw ``c_j`` would overflow.

Hermite:   f'' + (2n+1-x^2) f = 0
Legendre:  D f'' + E f = 0,  D = 4(1-x^2)^2,  E = (4n^2+4n)(1-x^2) + 4
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import kernel

HERMITE = 0
LEGENDRE = 1

HERMITE_CAP = 50
LEGENDRE_CAP = 100
HERMITE_TAIL_TOL = 1e-25
LEGENDRE_TAIL_TOL = 1e-19
_DENOM_FLOOR = 1e-300


@kernel
def family_cap(family):
    return HERMITE_CAP if family == HERMITE else LEGENDRE_CAP


@kernel
def family_tol(family):
    return HERMITE_TAIL_TOL if family == HERMITE else LEGENDRE_TAIL_TOL


@kernel
def coeff_r(family, n, x):
    """Normal-form coefficient r(x)."""
    if family == HERMITE:
        return 2.0 * n + 1.0 - x * x
    w1 = (1.0 - x) * (1.0 + x)
    kc = 4.0 * n * n + 4.0 * n
    return (kc * w1 + 4.0) / (4.0 * w1 * w1)


@kernel
def local_scale(family, n, x0):
    if family == HERMITE:
        r0 = 2.0 * n + 1.0 - x0 * x0
        # Airy length takes over near the turning point
        return 1.0 / math.sqrt(abs(r0) + (2.0 * abs(x0)) ** (2.0 / 3.0))
    w1 = (1.0 - x0) * (1.0 + x0)
    kc = 4.0 * n * n + 4.0 * n
    wave = 2.0 * w1 / math.sqrt(kc * w1 + 4.0)
    return min(wave, 1.0 - abs(x0))


@kernel
def max_hop(family, n, x0):
    """Largest displacement a single expansion centred at x0 is trusted for."""
    if family == HERMITE:
        r0 = 2.0 * n + 1.0 - x0 * x0
        return 2.0 * math.pi / math.sqrt(abs(r0) + (2.0 * abs(x0)) ** (2.0 / 3.0))
    w1 = (1.0 - x0) * (1.0 + x0)
    kc = 4.0 * n * n + 4.0 * n
    wave = 2.0 * w1 / math.sqrt(kc * w1 + 4.0)
    return min(2.0 * math.pi * wave, 0.5 * (1.0 - abs(x0)))


@kernel
def next_coeff(family, n, x0, s, a, j):
    """Scaled coefficient a[j+2] from a[j+1], a[j], a[j-1], a[j-2]."""
    aj = a[j]
    ajm1 = a[j - 1] if j >= 1 else 0.0
    ajm2 = a[j - 2] if j >= 2 else 0.0
    s2 = s * s
    if family == HERMITE:
        r0 = 2.0 * n + 1.0 - x0 * x0
        num = -r0 * s2 * aj + 2.0 * x0 * s2 * s * ajm1 + s2 * s2 * ajm2
        return num / ((j + 2.0) * (j + 1.0))
    w1 = (1.0 - x0) * (1.0 + x0)
    kc = 4.0 * n * n + 4.0 * n
    d0 = 4.0 * w1 * w1
    d1 = -16.0 * x0 * w1
    d2 = -16.0 + 48.0 * x0 * x0
    d3 = 96.0 * x0
    d4 = 96.0
    e0 = kc * w1 + 4.0
    e1 = -2.0 * kc * x0
    e2 = -2.0 * kc
    jf = float(j)
    acc = (jf + 1.0) * jf * d1 * s * a[j + 1]
    acc += (0.5 * jf * (jf - 1.0) * d2 + e0) * s2 * aj
    acc += ((jf - 1.0) * (jf - 2.0) / 6.0 * d3 + e1) * s2 * s * ajm1
    acc += ((jf - 2.0) * (jf - 3.0) / 24.0 * d4 + 0.5 * e2) * s2 * s2 * ajm2
    return -acc / ((jf + 2.0) * (jf + 1.0) * d0)


@kernel
def fill_coeffs(family, n, x0, s, a, filled, upto):
    """Extend a[0..filled] to a[0..upto]; returns the new filled index."""
    while filled < upto:
        a[filled + 1] = next_coeff(family, n, x0, s, a, filled - 1)
        filled += 1
    return filled


@kernel
def series_sum(family, n, x0, s, a, filled, t, tol, cap):
    """Sum the f and f' series at displacement t.

    Returns (f, fp, order, criterion_met, filled).  Hermite stops once the
    f'-tail ratio is below tol for two consecutive orders; Legendre stops at the
    first order where the larger of the f and f' tail ratios is below tol.
    """
    tau = t / s
    if tau == 0.0:
        return a[0], a[1] / s, 0, True, filled
    f = a[0]
    g = a[1]
    p = 1.0
    prev_small = False
    for k in range(1, cap + 1):
        p *= tau
        if filled < k + 1:
            filled = fill_coeffs(family, n, x0, s, a, filled, k + 1)
        tf = a[k] * p
        tg = (k + 1.0) * a[k + 1] * p
        f += tf
        g += tg
        if family == HERMITE:
            small = abs(tg) < tol * max(abs(g), _DENOM_FLOOR)
            if small and prev_small:
                return f, g / s, k, True, filled
            prev_small = small
        else:
            ratio_f = abs(tf) / max(abs(f), _DENOM_FLOOR)
            ratio_g = abs(tg) / max(abs(g), _DENOM_FLOOR)
            if max(ratio_f, ratio_g) < tol:
                return f, g / s, k, True, filled
    return f, g / s, cap, False, filled


@kernel
def hop(family, n, x0, f0, f1, t, buf):
    """(f, f') at x0 + t from the expansion seeded with (f0, f1) at x0."""
    s = local_scale(family, n, x0)
    buf[0] = f0
    buf[1] = f1 * s
    f, fp, order, ok, filled = series_sum(
        family, n, x0, s, buf, 1, t, family_tol(family), family_cap(family)
    )
    return f, fp, ok


@kernel
def advance(family, n, x0, f0, f1, target, buf):
    """Carry (f, f') from x0 to target in hops no longer than max_hop.

    Returns (f, fp, ok, hops); ok is False if any hop hit the order cap.
    """
    ok_all = True
    hops = 0
    while True:
        d = target - x0
        mh = max_hop(family, n, x0)
        if abs(d) <= mh:
            f, fp, ok = hop(family, n, x0, f0, f1, d, buf)
            return f, fp, ok_all and ok, hops + 1
        # hop to the rounded centre, by a displacement that is exact in double
        xn = x0 + (mh if d > 0.0 else -mh)
        f0, f1, ok = hop(family, n, x0, f0, f1, xn - x0, buf)
        ok_all = ok_all and ok
        x0 = xn
        hops += 1


@kernel
def build_coeffs(family, n, x0, f0, f1, order):
    """Scaled coefficient array a[0..order] (plus the local scale)."""
    s = local_scale(family, n, x0)
    a = np.zeros(order + 2)
    a[0] = f0
    a[1] = f1 * s
    fill_coeffs(family, n, x0, s, a, 1, order + 1)
    return a, s
