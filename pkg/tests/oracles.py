"""Independent reference computations used to freeze and cross-check values.

Nothing here imports the package's numerical engines: norms come from root
finding or quadrature, path laws from plain ``itertools`` enumeration.
"""

import itertools
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize


def orlicz_norm(values, probs, phi):
    """Root of ``lam -> sum p phi(|v|/lam) - 1`` for continuous increasing phi."""
    v = np.abs(np.asarray(values, float))
    p = np.asarray(probs, float)
    if np.all(v == 0):
        return 0.0
    g = lambda lam: float(np.dot(p, phi(v / lam))) - 1.0
    lo, hi = 1e-12, 1.0
    while g(hi) > 0:
        hi *= 2.0
    return optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-14, maxiter=500)


def rearrange(values, probs):
    """Decreasing rearrangement as (breakpoints, values)."""
    agg = defaultdict(float)
    for v, p in zip(values, probs):
        agg[abs(float(v))] += float(p)
    mags = sorted(agg, reverse=True)
    bp = [0.0]
    for m in mags:
        bp.append(bp[-1] + agg[m])
    bp[-1] = 1.0
    return np.array(bp), np.array(mags)


def lorentz_norm(values, probs, p, q):
    """Quadrature of ``(q/p) int (s**(1/p) f#(s))**q ds/s`` piece by piece."""
    bp, mags = rearrange(values, probs)
    if q == math.inf:
        return max(mags[i] * bp[i + 1] ** (1.0 / p) for i in range(len(mags)))
    total = 0.0
    for i, m in enumerate(mags):
        if m == 0:
            continue
        val, _ = integrate.quad(lambda s: s ** (q / p - 1.0), bp[i], bp[i + 1],
                                epsabs=0, epsrel=1e-13, limit=200)
        total += m ** q * val
    return (q / p * total) ** (1.0 / q)


def hardy_h1(values, probs, p, t):
    bp, mags = rearrange(values, probs)
    f = lambda s: mags[min(np.searchsorted(bp, s, side="right") - 1, len(mags) - 1)]
    pts = [b for b in bp if 0 < b < t]
    val, _ = integrate.quad(lambda s: f(s) ** (p / 2.0), 0.0, t, points=pts or None,
                            epsabs=0, epsrel=1e-12, limit=400)
    return (val / t) ** (2.0 / p)


def k_functional_convex(values, probs, p, q, t, starts=6, seed=0):
    """``inf ||x||_p + t ||f# - x||_q`` over ``0 <= x <= f#`` (convex for p, q >= 1)."""
    bp, v = rearrange(values, probs)
    w = np.diff(bp)

    def cost(x):
        a = np.dot(w, np.abs(x) ** p) ** (1.0 / p)
        b = np.dot(w, np.abs(v - x) ** q) ** (1.0 / q)
        return a + t * b

    rng = np.random.default_rng(seed)
    best = min(cost(np.zeros_like(v)), cost(v))
    for _ in range(starts):
        x0 = v * rng.uniform(size=v.size)
        res = optimize.minimize(cost, x0, method="L-BFGS-B",
                                bounds=list(zip(np.zeros_like(v), v)),
                                options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 2000})
        best = min(best, float(res.fun))
    return best


def path_law(funcs, n, stat="sum"):
    """Exact law over all sign paths; ``funcs[k-1](prefix)`` gives ``f_k``."""
    law = defaultdict(Fraction)
    for path in itertools.product((-1, 1), repeat=n):
        incs = [funcs[k](path[: k + 1]) for k in range(n)]
        law[_stat(incs, stat)] += Fraction(1, 2 ** n)
    return dict(law)


def decoupled_law(funcs, n, stat="sum"):
    """Exact law of the decoupled statistic over all ``(eps, eps')`` pairs."""
    law = defaultdict(Fraction)
    for eps in itertools.product((-1, 1), repeat=n):
        for eps2 in itertools.product((-1, 1), repeat=n):
            incs = [funcs[k](eps[:k] + (eps2[k],)) for k in range(n)]
            law[_stat(incs, stat)] += Fraction(1, 4 ** n)
    return dict(law)


def _stat(incs, stat):
    if stat == "sum":
        return round(sum(incs), 9)
    if stat == "max_increment":
        return round(max(abs(x) for x in incs), 9)
    s, m = 0.0, 0.0
    for x in incs:
        s += x
        m = max(m, abs(s))
    return round(m, 9)


def kolmogorov_sides(xis, q, t):
    """Exact ``P(S* >= t)`` and the converse bound's right side by product enumeration."""
    es = ex = 0.0
    outcomes = []
    for combo in itertools.product(*xis):
        w = math.prod(p for _, p in combo)
        s, smax, xmax = 0.0, 0.0, 0.0
        for v, _ in combo:
            s += v
            smax = max(smax, abs(s))
            xmax = max(xmax, abs(v))
        es += w * smax ** q
        ex += w * xmax ** q
        outcomes.append((smax, w))
    lhs = sum(w for m, w in outcomes if m >= t)
    rhs = 2.0 ** -q * (1 - 2.0 ** (2 * q) * (t ** q + ex) / es)
    return lhs, rhs


def prop23_coefficients(k, N1):
    """Block sizes and a predicate-style ``v_j(prefix)`` built from the set definitions."""
    N = [N1]
    for i in range(2, k + 1):
        N.append(N[-1] + N1 // 2 ** (i - 1))

    def in_omega(i, path):
        if i == 0:
            return True
        if not all(path[j] == 1 for j in range(N1)):
            return False
        for level in range(2, i + 1):
            block = path[N[level - 2]: N[level - 1]]
            if len(set(block)) != 1:
                return False
        return True

    def v(j, path):
        # j is 0-based; block i holds indices N_{i-1} .. N_i - 1
        i = next(b for b in range(k) if j < N[b]) + 1
        return float(2 ** (i - 1)) if in_omega(i - 1, path) else 0.0

    return N, v


def prop23_expectations(k, N1, brute_pairs=True):
    """``E Phi(|sum v r|)`` and ``E Phi((k/4)|sum v r'|)`` by direct enumeration."""
    N, v = prop23_coefficients(k, N1)
    n = N[-1]
    a = k * N1 - k / 4.0
    phi = lambda x: max(x - a, 0.0)
    lhs = 0.0
    for path in itertools.product((-1, 1), repeat=n):
        lhs += phi(abs(sum(v(j, path) * path[j] for j in range(n)))) / 2 ** n
    rhs = None
    if brute_pairs:
        rhs = 0.0
        for eps in itertools.product((-1, 1), repeat=n):
            coef = [v(j, eps) for j in range(n)]
            for eps2 in itertools.product((-1, 1), repeat=n):
                rhs += phi(k / 4.0 * abs(sum(c * e for c, e in zip(coef, eps2)))) / 4 ** n
    return lhs, rhs


def hardy_h2(values, probs, p, t):
    bp, mags = rearrange(values, probs)
    total = 0.0
    for i, m in enumerate(mags):
        lo, hi = max(bp[i], t), bp[i + 1]
        if hi > lo:
            total += m ** (2 * p) * (hi - lo)
    return (total / t) ** (1.0 / (2 * p))


def hg_lorentz_norm(values, probs, p, q):
    """``||Hg||_{p,q}`` with ``Hg = H1 g + H2 g`` by quadrature in ``log t``."""
    bp, _ = rearrange(values, probs)

    def integrand(u):
        t = math.exp(u)
        h = hardy_h1(values, probs, p, t) + hardy_h2(values, probs, p, t)
        return (t ** (1.0 / p) * h) ** q

    pts = [math.log(b) for b in bp[1:-1] if b > 0]
    val, _ = integrate.quad(integrand, -80.0, 0.0, points=pts or None, limit=400,
                            epsabs=0, epsrel=1e-10)
    return (q / p * val) ** (1.0 / q)
