#!/usr/bin/env python3
"""Independent oracle for the weighted Wiener small-deviation series.

    S(lam) = sum_{n>=1} n^(r-2) (log n)^a P(sup|W| <= sqrt(pi^2/(8 log n)) (eps + tau/log n))

with log n = ln(max(n, e)) and eps = (lam + r - 1)^(-1/2).

Route: vectorised float64 direct summation of the exact theta series for
n <= N (default 10^7, pairwise numpy summation), then the remainder
sum_{n>N} f(n) by Euler-Maclaurin, with the integral int_N^inf f(x) dx
evaluated by mpmath adaptive quadrature in y = ln x on the continuous
extension of the exact summand.  Shares no code with the C++ engine.

Prints a JSON object {"cases": [...]} with normalised values lam^(a+1) S.
"""
import json
import math
import sys

import mpmath as mp
import numpy as np

mp.mp.dps = 30
THETA_TERMS = 6


def theta_cdf_np(x):
    """P(sup_{[0,1]} |W| <= x) for an array x > 0 (first THETA_TERMS terms)."""
    out = np.zeros_like(x)
    for k in range(THETA_TERMS):
        m = 2 * k + 1
        out += (-1) ** k / m * np.exp(-(math.pi ** 2) * m * m / (8.0 * x * x))
    return 4.0 / math.pi * out


def theta_cdf_mp(x):
    s = mp.mpf(0)
    for k in range(THETA_TERMS):
        m = 2 * k + 1
        s += (-1) ** k / mp.mpf(m) * mp.exp(-mp.pi ** 2 * m * m / (8 * x * x))
    return 4 / mp.pi * s


def direct_sum(r, a, tau, eps, n_max, block=1 << 22):
    total = 0.0
    comp = []
    start = 1
    while start <= n_max:
        stop = min(n_max, start + block - 1)
        n = np.arange(start, stop + 1, dtype=np.float64)
        L = np.log(np.maximum(n, math.e))
        x = np.sqrt(math.pi ** 2 / (8.0 * L)) * (eps + tau / L)
        f = n ** (r - 2.0) * L ** a * theta_cdf_np(x)
        comp.append(np.sum(f))  # numpy uses pairwise summation
        start = stop + 1
    return math.fsum(comp)


def summand_mp(x, r, a, tau, eps):
    L = mp.log(x) if x > mp.e else mp.mpf(1)
    arg = mp.sqrt(mp.pi ** 2 / (8 * L)) * (eps + tau / L)
    return x ** (r - 2) * L ** a * theta_cdf_mp(arg)


def tail_sum(r, a, tau, eps, n_max):
    N = mp.mpf(n_max)
    Y = mp.log(N)

    def g(y):
        return mp.exp(y) * summand_mp(mp.exp(y), r, a, tau, eps)

    lam = eps ** -2 - (r - 1)
    scale = 1 / lam
    pts = [Y + k * scale for k in (0, 0.25, 1, 3, 8, 20, 50)] + [mp.inf]
    integral = mp.quad(g, pts)
    fN = summand_mp(N, r, a, tau, eps)
    dfN = mp.diff(lambda t: summand_mp(t, r, a, tau, eps), N)
    d3fN = mp.diff(lambda t: summand_mp(t, r, a, tau, eps), N, 3)
    # sum_{n>N} f(n) = int_N^inf f - f(N)/2 - f'(N)/12 + f'''(N)/720
    return integral - fN / 2 - dfN / 12 + d3fN / 720


def normalized(r, a, tau, lam, n_max):
    eps = (lam + r - 1) ** -0.5
    head = direct_sum(r, a, tau, eps, n_max)
    tail = tail_sum(r, a, tau, mp.mpf(lam + r - 1) ** mp.mpf(-0.5), n_max)
    total = mp.mpf(head) + tail
    return float(mp.mpf(lam) ** (a + 1) * total), float(total)


def main():
    n_max = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10_000_000
    cases = []
    grid = [
        (2.0, 0.0, 0.0, [0.2345679012345679, 0.1, 0.05, 0.025, 0.02, 0.0125, 0.01]),
        (2.0, 1.0, 0.0, [0.1, 0.05, 0.025, 0.0125, 0.01]),
        (2.0, 0.0, 1.0, [0.1, 0.05, 0.025, 0.0125, 0.01]),
        (2.0, 1.0, 1.0, [0.05]),
        (3.0, 0.5, -0.5, [0.05]),
        (1.5, -0.5, 0.0, [0.05]),
    ]
    for r, a, tau, lams in grid:
        for lam in lams:
            norm, total = normalized(r, a, tau, lam, n_max)
            cases.append({"r": r, "a": a, "tau": tau, "lambda": lam,
                          "total": total, "normalized": norm})
            print(json.dumps(cases[-1]), file=sys.stderr)
    print(json.dumps({"n_direct": n_max, "cases": cases}, indent=1))


if __name__ == "__main__":
    main()
