"""Independent float64 computations of the regression values pinned in the tests.

Run: python3 tests/oracles/frozen_values.py
Uses only the closed forms of the construction, no code from include/.
"""

import math

GAMMA, BETA, N = 0.5, 1.5, 1000
ALPHA = 2.0 * (2.0 * math.pi) ** (-GAMMA)


def f(x):
    return 2.0 if x == 0.0 else x ** GAMMA * math.sin(1.0 / x) + 2.0


def lower(n):
    return (2.0 / math.pi) / (4 * n - 1)


def upper(n):
    return (2.0 / math.pi) / (4 * n - 3)


def tail_bound(n):
    p = BETA + GAMMA - 1.0
    return ALPHA / p * (n + 2.0) ** (-p)


def partial(n):
    tail = 0.0
    for k in range(N, n, -1):
        tail += k ** (-BETA) * (f(upper(k)) - f(lower(k)))
    return n ** (-BETA) * f(lower(n)) - tail


def sampled_tv(c, d, m):
    prev, total = f(c), 0.0
    for i in range(1, m + 1):
        t = d if i == m else c + (d - c) * (i / m)
        v = f(t)
        total += abs(v - prev)
        prev = v
    return total


def certified_threshold(f_sup):
    n = 1
    while not f_sup * n ** (-BETA) < tail_bound(n):
        n += 1
    return n


if __name__ == "__main__":
    for n in (5, 6, 7):
        print(f"partial({n}) = {partial(n)!r}  upper({n}) = {partial(n) - tail_bound(N)!r}")
    print("tail_bound(N) =", repr(tail_bound(N)))
    print("sampled TV [0,0.1] 2^10 =", repr(sampled_tv(0.0, 0.1, 2**10)))
    print("sampled TV [0,0.1] 2^20 =", repr(sampled_tv(0.0, 0.1, 2**20)))
    xs = [i / 10000 for i in range(10001)]
    m = min(xs, key=f)
    print("grid min f =", repr(f(m)), "at", m)
    print("certified_threshold(3) =", certified_threshold(3.0))
    s = math.fsum(ALPHA * k ** (-(BETA + GAMMA)) for k in range(8, 10**6 + 1))
    print("sum_{k=8}^{1e6} alpha k^-2 =", repr(s), " tail_bound(7) =", repr(tail_bound(7)))
