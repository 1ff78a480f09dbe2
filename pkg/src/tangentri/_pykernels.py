"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_ckernels`` module one for one. An Orlicz
function reaching a kernel is in canonical form ``x -> min_i coefs[i] *
base_i(x)`` where ``base_i`` is ``x**params[i]`` (kind 0) or
``max(x - params[i], 0)`` (kind 1).
"""

import numpy as np

POWER = 0
HINGE = 1


def phi_terms(x, coefs, kinds, params):
    x = np.asarray(x, dtype=np.float64)
    out = np.full(x.shape, np.inf)
    for c, k, a in zip(coefs, kinds, params):
        if k == POWER:
            v = c * np.power(x, a)
        else:
            v = c * np.maximum(x - a, 0.0)
        np.minimum(out, v, out=out)
    return out


def expect_terms(values, probs, coefs, kinds, params, scale):
    phi = phi_terms(np.abs(values) / scale, coefs, kinds, params)
    return float(np.dot(probs, phi))


def orlicz_bisect(values, probs, coefs, kinds, params, lo, hi, rtol, maxiter):
    """Shrink ``[lo, hi]`` around the Orlicz norm; returns ``(hi, iterations)``.

    Requires ``E phi(|f|/lo) > 1 >= E phi(|f|/hi)``.
    """
    it = 0
    while hi - lo > rtol * hi and it < maxiter:
        mid = 0.5 * (lo + hi)
        if expect_terms(values, probs, coefs, kinds, params, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return hi, it


def path_stats(flat, offsets, depth):
    """Per-path sum, max |increment| and max |partial sum| over ``2**depth`` paths.

    Level ``k`` (1-based) lives in ``flat[offsets[k-1]:offsets[k-1] + 2**k]`` and
    path ``p`` reads index ``p >> (depth - k)``.
    """
    npaths = 1 << depth
    paths = np.arange(npaths, dtype=np.int64)
    s = np.zeros(npaths)
    maxinc = np.zeros(npaths)
    maxpart = np.zeros(npaths)
    for k in range(1, depth + 1):
        v = flat[offsets[k - 1] + (paths >> (depth - k))]
        s += v
        np.maximum(maxinc, np.abs(v), out=maxinc)
        np.maximum(maxpart, np.abs(s), out=maxpart)
    return s, maxinc, maxpart


def pair_stats(flat, offsets, depth):
    """Same statistics for the decoupled sequence over ``4**depth`` pairs.

    Pair ``e * 2**depth + e2`` pairs base path ``e`` with copy path ``e2``; step
    ``k`` reads ``2 * (e >> (depth - k + 1)) + bit_k(e2)`` from level ``k``.
    """
    n = 1 << depth
    e = np.repeat(np.arange(n, dtype=np.int64), n)
    e2 = np.tile(np.arange(n, dtype=np.int64), n)
    s = np.zeros(n * n)
    maxinc = np.zeros(n * n)
    maxpart = np.zeros(n * n)
    for k in range(1, depth + 1):
        idx = 2 * (e >> (depth - k + 1)) + ((e2 >> (depth - k)) & 1)
        v = flat[offsets[k - 1] + idx]
        s += v
        np.maximum(maxinc, np.abs(v), out=maxinc)
        np.maximum(maxpart, np.abs(s), out=maxpart)
    return s, maxinc, maxpart
