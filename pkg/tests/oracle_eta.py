"""Independent arbitrary-precision evaluation of the heading-gain recursion.

Deliberately shares no code with the package: the recursion is evaluated
through mpmath at 40 significant digits, taking the exact double-precision
arguments as inputs.  Run as a script to print the acceptance grid.
"""
from __future__ import annotations

import math

import mpmath as mp

DPS = 40

GRID_N = (2, 3, 5, 10)
GRID_BETA = (math.pi / 6, math.pi / 2, 3 * math.pi / 4)
GRID_EPSILON = (0.01, 0.1, math.pi / 2)


def eta_mp(k: int, n: int, beta: float, epsilon: float) -> mp.mpf:
    with mp.workdps(DPS):
        b = mp.mpf(beta)
        e = mp.mpf(epsilon)
        val = min(
            mp.atan(mp.sin(b) / (n + mp.cos(b))),
            mp.atan(mp.sin(e) / (n + mp.cos(e))),
        )
        for _ in range(k - 1):
            val = mp.atan(mp.sin(val) / (n - 1 + mp.cos(val)))
        return val


def delta_bound_mp(n: int, beta: float, epsilon: float) -> mp.mpf:
    return eta_mp(n, n, beta, epsilon)


if __name__ == "__main__":
    for n in GRID_N:
        for beta in GRID_BETA:
            for epsilon in GRID_EPSILON:
                val = mp.nstr(delta_bound_mp(n, beta, epsilon), 35)
                print(f"n={n} beta={beta!r} eps={epsilon!r}: eta(n)={val}")
