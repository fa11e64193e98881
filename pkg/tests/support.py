"""Shared test oracles: brute-force projections and random cone members."""

import itertools

import numpy as np


def brute_isotonic_nonincreasing(z):
    """Minimize over all ordered block partitions, blockwise means.

    The projection onto the nonincreasing cone is blockwise constant with
    each block value the mean of its inputs, so enumerating every split
    into consecutive blocks, keeping the order-feasible candidates, and
    taking the closest one recovers it exactly. Exponential in p; use for
    p <= 12 or so.
    """
    z = np.asarray(z, dtype=np.float64)
    p = z.size
    best, best_d = None, np.inf
    for cuts in itertools.product((False, True), repeat=p - 1):
        bounds = [0] + [i + 1 for i, c in enumerate(cuts) if c] + [p]
        cand = np.empty(p)
        means = []
        for a, b in zip(bounds, bounds[1:]):
            m = z[a:b].mean()
            cand[a:b] = m
            means.append(m)
        if any(means[i] + 1e-12 < means[i + 1] for i in range(len(means) - 1)):
            continue
        d = float(np.sum((cand - z) ** 2))
        if d < best_d:
            best, best_d = cand, d
    return best


def soc_project(t, w):
    """Closed-form projection onto the second-order cone {(t, w): t >= ||w||}."""
    w = np.asarray(w, dtype=np.float64)
    nw = float(np.linalg.norm(w))
    if nw <= t:
        return float(t), w.copy()
    if nw <= -t:
        return 0.0, np.zeros_like(w)
    a = 0.5 * (t + nw)
    return a, (a / nw) * w


def random_mesoc_member(rng, p, q, boundary=False):
    """Constructive sample of (x, u) with x_1 >= ... >= x_p >= ||u||."""
    u = rng.standard_normal(q)
    slack = 0.0 if boundary else abs(rng.standard_normal())
    x = np.empty(p)
    x[-1] = np.linalg.norm(u) + slack
    for i in range(p - 2, -1, -1):
        x[i] = x[i + 1] + abs(rng.standard_normal())
    return x, u


def random_mesoc_dual_member(rng, p, q, boundary=False):
    """Constructive sample of (y, v) with prefix sums >= 0 and sum(y) >= ||v||."""
    v = rng.standard_normal(q)
    slack = 0.0 if boundary else abs(rng.standard_normal())
    prefixes = np.abs(rng.standard_normal(p))
    prefixes[-1] = np.linalg.norm(v) + slack
    y = np.empty(p)
    y[0] = prefixes[0]
    y[1:] = np.diff(prefixes)
    return y, v


def random_weights(rng, n):
    """Moderate random weights summing to 1 exactly (no huge entries)."""
    w = rng.normal(1.0 / n, 1.0, n)
    w += (1.0 - w.sum()) / n
    return w


def feasible_portfolio_point(rng, T, s, w, collapsed=True):
    """Cone-and-hyperplane feasible (y_rev, u) with sum(u) = s.

    With collapsed=True the deviation bounds sit on the cone boundary,
    which is where the optimum lives; loose points are dominated but still
    feasible.
    """
    u = s * np.asarray(w, dtype=np.float64)
    base = float(np.linalg.norm(u))
    if collapsed:
        y_rev = np.full(T, base)
    else:
        y_rev = base + np.sort(np.abs(rng.standard_normal(T)))[::-1]
    return np.concatenate([y_rev, u])
