#!/usr/bin/env python3
"""Generate a plain-format table of the first N nontrivial zeta zero ordinates.

The public tables (Odlyzko's zeros1, LMFDB) are the intended input for the
tool. This script regenerates an equivalent fixture offline: Riemann-Siegel
Z(t) with the C0..C4 correction terms, sign-change bracketing on a fine grid
checked against Gram-block counts, and vectorized bisection. The lowest zeros
are taken directly from mpmath.zetazero.

Usage: python3 tools/gen_zeros.py [count] [start_ordinal] > out.txt
"""
import sys

import mpmath
import numpy as np

TWO_PI = 2.0 * np.pi
LOW_COUNT = 200


def psi(p):
    return mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * p)


def correction_fits(degree=48, nodes=160):
    """Chebyshev fits of C0..C4 on p in [0, 1]."""
    mpmath.mp.dps = 60
    pi = mpmath.pi
    xs = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    ps = 0.5 * (xs + 1.0)
    cols = [[] for _ in range(5)]
    for p in ps:
        d = mpmath.taylor(psi, mpmath.mpf(float(p)), 12)
        der = [d[k] * mpmath.factorial(k) for k in range(13)]
        c0 = der[0]
        c1 = -der[3] / (96 * pi**2)
        c2 = der[2] / (64 * pi**2) + der[6] / (18432 * pi**4)
        c3 = -der[1] / (64 * pi**2) - der[5] / (3840 * pi**4) - der[9] / (5308416 * pi**6)
        c4 = (der[0] / (128 * pi**2) + 19 * der[4] / (24576 * pi**4)
              + 11 * der[8] / (5898240 * pi**6) + der[12] / (2038431744 * pi**8))
        for k, c in enumerate((c0, c1, c2, c3, c4)):
            cols[k].append(float(c))
    return [np.polynomial.chebyshev.chebfit(xs, np.array(c), degree) for c in cols]


FITS = None


def theta(t):
    return (t / 2.0 * np.log(t / TWO_PI) - t / 2.0 - np.pi / 8.0
            + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t**3))


def z_function(t):
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / TWO_PI)
    n_terms = np.floor(a).astype(np.int64)
    p = a - n_terms
    th = theta(t)
    total = np.zeros_like(t)
    for k in range(1, int(n_terms.max()) + 1):
        mask = n_terms >= k
        total += np.where(mask, np.cos(th - t * np.log(k)) / np.sqrt(k), 0.0)
    total *= 2.0
    x = 2.0 * p - 1.0
    w = 1.0 / a
    rem = np.zeros_like(t)
    for k, fit in enumerate(FITS):
        rem += np.polynomial.chebyshev.chebval(x, fit) * w**k
    sign = np.where((n_terms - 1) % 2 == 0, 1.0, -1.0)
    return total + sign * np.sqrt(w) * rem


def gram_point(k):
    """Solve theta(g) = k*pi by Newton."""
    target = np.pi * np.asarray(k, dtype=np.float64)
    g = np.maximum(target / np.log(np.maximum(target, 10.0)), 20.0)
    for _ in range(60):
        g = g - (theta(g) - target) / (0.5 * np.log(g / TWO_PI))
    return g


def brackets(lo, hi, step):
    grid = np.arange(lo, hi, step)
    grid = np.append(grid, hi)
    vals = np.concatenate([z_function(c) for c in np.array_split(grid, max(1, len(grid) // 50000))])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return grid[idx], grid[idx + 1]


def bisect(a, b):
    fa = np.concatenate([z_function(c) for c in np.array_split(a, max(1, len(a) // 50000))])
    for _ in range(60):
        m = 0.5 * (a + b)
        fm = np.concatenate([z_function(c) for c in np.array_split(m, max(1, len(m) // 50000))])
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    return 0.5 * (a + b)


def good_gram_indices(k_lo, k_hi):
    ks = np.arange(k_lo, k_hi + 1, dtype=np.float64)
    g = gram_point(ks)
    sign = np.where(ks.astype(np.int64) % 2 == 0, 1.0, -1.0)
    good = sign * z_function(g) > 0
    return ks[good].astype(np.int64), g[good]


def zeros_between(k_lo, k_hi):
    """Zeros between the first and last good Gram points in [k_lo, k_hi].

    At a good Gram point g_k ((-1)^k Z(g_k) > 0) the number of zeros below
    g_k is k + 1, so each block between consecutive good Gram points holds
    exactly as many zeros as the index difference. Blocks that come up short
    (close pairs missed by the coarse grid) are rescanned on a fine grid.
    Returns (ordinal of first zero, zeros).
    """
    ks, gs = good_gram_indices(k_lo, k_hi)
    out = []
    for (k0, g0), (k1, g1) in zip(zip(ks[:-1], gs[:-1]), zip(ks[1:], gs[1:])):
        out.append((k0, k1, g0, g1))
    found = []
    lo, stop = gs[0], gs[-1]
    while lo < stop:
        hi = min(lo + 2000.0, stop)
        spacing = TWO_PI / np.log(hi / TWO_PI)
        a, b = brackets(lo, hi, spacing / 16.0)
        found.append(bisect(a, b))
        lo = hi
    zeros = np.concatenate(found)
    zeros = zeros[(zeros > gs[0]) & (zeros < gs[-1])]
    want = np.diff(ks)
    have = np.diff(np.searchsorted(zeros, gs))
    pieces = []
    for i in range(len(ks) - 1):
        inside = zeros[(zeros > gs[i]) & (zeros < gs[i + 1])]
        if have[i] != want[i]:
            a, b = brackets(gs[i], gs[i + 1], (gs[i + 1] - gs[i]) / 20000.0)
            inside = bisect(a, b)
            if len(inside) != want[i]:
                raise SystemExit(f"unresolved Gram block [{gs[i]}, {gs[i + 1]}]: {len(inside)} != {want[i]}")
        pieces.append(inside)
    return int(ks[0]) + 2, np.concatenate(pieces)


def main():
    global FITS
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 100000
    start = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    mpmath.mp.dps = 20
    FITS = correction_fits()
    last = start + count - 1
    lines = {}
    if last > LOW_COUNT:
        k_lo = max(start, LOW_COUNT) - 30
        first, zeros = zeros_between(k_lo, last + 50)
        for k, z in enumerate(zeros, start=first):
            if max(start, LOW_COUNT + 1) <= k <= last:
                lines[k] = f"{z:.9f}"
    for k in range(start, min(LOW_COUNT, last) + 1):
        z = mpmath.zetazero(k).imag
        text = mpmath.nstr(z, 30, min_fixed=-1, max_fixed=30, strip_zeros=False)
        lines[k] = text[: len(str(int(z))) + 10]
    if sorted(lines) != list(range(start, last + 1)):
        raise SystemExit("missing ordinals in output")
    print(f"# nontrivial zeta zero ordinates {start}..{last}, 9 decimals")
    print("# generated by tools/gen_zeros.py (Riemann-Siegel + mpmath)")
    for k in range(start, last + 1):
        print(lines[k])


if __name__ == "__main__":
    main()
