"""Lorentz norms, dilations, Hardy operators and K-functionals.

Everything here works on decreasing step functions, so each integral is a
finite sum over constancy intervals. K-functionals are computed as the
minimum over a fixed family of explicit splits of ``f#``; that family does
not depend on ``t``, so ``t -> K(f, t)`` is a minimum of affine functions and
therefore concave and nondecreasing, exactly as the true K-functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import StepFunction, as_step, p_norm
from .orlicz import SANDWICH_SLACK, orlicz_norm, phi_t

DEFAULT_T_GRID = 2.0 ** np.arange(-16, 17, dtype=np.float64)
DENSE_T_GRID = np.logspace(-32, 32, 257, base=2.0)
H_GRID_POINTS = 1024
H_GRID_FLOOR = 2.0 ** -40


@dataclass(frozen=True)
class LorentzParams:
    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError("Lorentz parameters need p, q > 0")


@dataclass(frozen=True)
class KFunctionalQuery:
    p: float
    q: float
    t: float

    def __post_init__(self):
        if not 0 < self.p < self.q < math.inf:
            raise ValueError("K-functional needs 0 < p < q < inf")
        if not self.t >= 0:
            raise ValueError("K-functional needs t >= 0")


def lorentz_norm(f, p, q):
    """``||f||_{p,q}`` integrated exactly over the steps of ``f#``.

    For ``q < inf`` this is ``(sum v_i**q (s_i**(q/p) - s_{i-1}**(q/p)))**(1/q)``.
    For ``q = inf`` it is ``max_i s_i**(1/p) v_i``, the supremum of
    ``s**(1/p) f#(s)`` being approached at the right end of each step.
    """
    LorentzParams(p, q)
    fs = as_step(f)
    v, s = fs.values, fs.breakpoints
    if p == math.inf:
        if q == math.inf:
            return float(v[0])
        return 0.0 if v[0] == 0 else math.inf
    if q == math.inf:
        return float(np.max(np.power(s[1:], 1.0 / p) * v))
    r = q / p
    w = np.power(s[1:], r) - np.power(s[:-1], r)
    return float(np.dot(np.power(v, q), w)) ** (1.0 / q)


def dilate(f, a):
    """``s -> f#(a s)`` on ``[0, 1)``, with ``f#`` extended by 0 beyond 1."""
    if not a > 0:
        raise ValueError("dilation factor must be > 0")
    fs = as_step(f)
    if a == 1:
        return fs
    bp = fs.breakpoints / a
    vals = fs.values
    if a > 1:
        bp = np.append(bp, 1.0)
        vals = np.append(vals, 0.0)
    else:
        keep = bp[:-1] < 1.0
        vals = vals[keep]
        bp = np.append(bp[:-1][keep], 1.0)
    return StepFunction.from_pieces(bp, vals, decreasing=True)


def _cumulative(fs, power):
    """Breakpoints and ``int_0^s f#**power`` at each breakpoint."""
    pieces = np.power(fs.values, power) * fs.lengths
    return fs.breakpoints, np.concatenate([[0.0], np.cumsum(pieces)])


def _check_t(t, upper=1.0):
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0) or np.any(t > upper):
        raise ValueError(f"t must lie in (0, {upper:g}]")
    return t


def hardy_h1(f, p, t):
    """``((1/t) int_0^t f#(s)**(p/2) ds)**(2/p)``; vectorised in ``t``."""
    if not p > 0:
        raise ValueError("p must be > 0")
    fs = as_step(f)
    t = _check_t(t)
    bp, cum = _cumulative(fs, p / 2.0)
    # the integral of a step function is piecewise linear between breakpoints
    out = np.power(np.interp(t, bp, cum) / t, 2.0 / p)
    return out if out.ndim else float(out)


def hardy_h2(f, p, t):
    """``((1/t) int_t^1 f#(s)**(2p) ds)**(1/(2p))``; vectorised in ``t``."""
    if not p > 0:
        raise ValueError("p must be > 0")
    fs = as_step(f)
    t = _check_t(t)
    # suffix sums: subtracting from the total would cancel when the head dominates
    bp, vals = fs.breakpoints, np.power(fs.values, 2.0 * p)
    suffix = np.concatenate([np.cumsum((vals * fs.lengths)[::-1])[::-1], [0.0]])
    j = np.clip(np.searchsorted(bp, t, side="right") - 1, 0, vals.size - 1)
    tail = suffix[j + 1] + vals[j] * np.maximum(bp[j + 1] - t, 0.0)
    out = np.power(tail / t, 1.0 / (2.0 * p))
    return out if out.ndim else float(out)


def b_norm(f, p, t):
    """``H1 f(t) + H2 f(t)``."""
    return hardy_h1(f, p, t) + hardy_h2(f, p, t)


def _lp_rows(values, lengths, p):
    """Row-wise L_p norms of step functions sharing the lengths ``lengths``."""
    return np.power(np.power(values, p) @ lengths, 1.0 / p)


def refine(fs, breakpoints):
    """Same function written on a finer partition (no merging of pieces)."""
    bp = np.asarray(breakpoints, dtype=np.float64)
    return StepFunction(bp, fs(bp[:-1]), decreasing=fs.decreasing)


def default_levels(fs):
    vmax = float(fs.values[0])
    if vmax == 0:
        return np.zeros(1)
    return np.union1d(fs.values, vmax * 2.0 ** (-np.arange(0, 33) / 2.0))


@dataclass(frozen=True)
class KCandidates:
    """Split family for ``K_{p,q}``: candidate ``i`` costs ``a[i] + t * b[i]``."""

    a: np.ndarray
    b: np.ndarray
    labels: tuple

    def evaluate(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        vals = self.a[None, :] + t[:, None] * self.b[None, :]
        out = vals.min(axis=1)
        out[t == 0] = 0.0
        return out

    def argmin(self, t):
        return self.labels[int(np.argmin(self.a + t * self.b))]


def k_candidates(f, p, q, cuts=None, levels=None, alphas=101):
    """Build the split family used for ``K_{p,q}(f, .)``.

    Splits: cuts of ``f#`` at every point of ``cuts`` (default: the
    breakpoints of ``f#``) with the head sent to ``L_p`` and the tail to
    ``L_q`` or the reverse; truncations ``(f# - c)+`` and ``f#  min  c`` at each
    level in ``levels``, again in both assignments; and scalar splits
    ``alpha f#``. Passing the same ``cuts`` and ``levels`` to two functions
    with ``f# <= g#`` gives candidate-wise domination, hence
    ``K(f, t) <= K(g, t)`` for the computed values too.
    """
    fs = as_step(f)
    levels = default_levels(fs) if levels is None else np.asarray(levels, dtype=np.float64)
    if cuts is None:
        cuts = fs.breakpoints
    else:
        # work on the common refinement so dominated inputs stay dominated term by term
        cuts = np.union1d(np.clip(cuts, 0.0, 1.0), [0.0, 1.0])
        fs = refine(fs, np.union1d(cuts, fs.breakpoints))
    v, s, w = fs.values, fs.breakpoints, fs.lengths

    left, right = s[:-1], s[1:]
    over = np.clip(np.minimum(right[None, :], cuts[:, None]) - left[None, :], 0.0, None)
    rest = w[None, :] - over
    rest = np.clip(rest, 0.0, None)

    def lp_weighted(weights, r):
        return np.power(weights @ np.power(v, r), 1.0 / r)

    head_p, tail_q = lp_weighted(over, p), lp_weighted(rest, q)
    head_q, tail_p = lp_weighted(over, q), lp_weighted(rest, p)

    top = np.clip(v[None, :] - levels[:, None], 0.0, None)
    low = np.minimum(v[None, :], levels[:, None])
    top_p, top_q = _lp_rows(top, w, p), _lp_rows(top, w, q)
    low_p, low_q = _lp_rows(low, w, p), _lp_rows(low, w, q)

    alpha = np.linspace(0.0, 1.0, alphas)
    fp, fq = _lp_rows(v[None, :], w, p)[0], _lp_rows(v[None, :], w, q)[0]

    a = np.concatenate([head_p, tail_p, top_p, low_p, alpha * fp])
    b = np.concatenate([tail_q, head_q, low_q, top_q, (1 - alpha) * fq])
    labels = (
        [("cut_head_p", float(u)) for u in cuts]
        + [("cut_head_q", float(u)) for u in cuts]
        + [("trunc_top_p", float(c)) for c in levels]
        + [("trunc_top_q", float(c)) for c in levels]
        + [("scalar", float(x)) for x in alpha]
    )
    return KCandidates(a, b, tuple(labels))


def k_functional(f, query=None, *, p=None, q=None, t=None, cuts=None, levels=None):
    """Upper bound on ``K_{p,q}(f, t) = inf ||f'||_p + t ||f''||_q``.

    Accepts a :class:`KFunctionalQuery` or keyword ``p, q, t``. ``t`` may be
    an array, in which case an array is returned.
    """
    if query is None:
        KFunctionalQuery(p, q, float(np.min(t)))
    else:
        p, q, t = query.p, query.q, query.t
    cand = k_candidates(f, p, q, cuts=cuts, levels=levels)
    out = cand.evaluate(t)
    return out if np.ndim(t) else float(out[0])


def a_norm(f, p, t, cuts=None, levels=None):
    """Upper bound on ``||f||_{a(t)}`` plus its proved lower bound.

    ``||f||_{a(t)} = t**(-2/p) K_{p/2, 2p}(f, t**(3/(2p)))``; the split family
    always contains the cut at ``t``, whose cost is ``||f||_{b(t)}``.
    Returns ``(value, lower)`` with ``lower = min(1, 2**(1-2/p)) f#(t)``.
    """
    fs = as_step(f)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    c = fs.breakpoints if cuts is None else np.asarray(cuts)
    c = np.union1d(c, [t])
    k = k_functional(fs, p=p / 2.0, q=2.0 * p, t=t ** (3.0 / (2.0 * p)),
                     cuts=c, levels=levels)
    value = t ** (-2.0 / p) * k
    lower = min(1.0, 2.0 ** (1 - 2.0 / p)) * float(fs(t))
    return value, lower


@dataclass(frozen=True)
class Lemma32Row:
    t: float
    lower: float
    k: float
    upper: float
    passed: bool


@dataclass(frozen=True)
class Lemma32Report:
    p: float
    q: float
    rows: tuple
    passed: bool
    violations: int


def verify_lemma32(f, p, q, t_grid=None, slack=SANDWICH_SLACK):
    """Check ``2**(-1-1/p) ||f||_{Phi_t} <= K_{p,q}(f,t) <= 2 ||f||_{Phi_t}`` on a grid."""
    ts = DEFAULT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    KFunctionalQuery(p, q, float(np.min(ts)))
    fs = as_step(f)
    ks = k_functional(fs, p=p, q=q, t=ts)
    rows = []
    c = 2.0 ** (-1.0 - 1.0 / p)
    for t, k in zip(ts.tolist(), ks.tolist()):
        n = orlicz_norm(fs, phi_t(p, q, t)) if t > 0 else 0.0
        lo, hi = c * n, 2.0 * n
        ok = lo <= k * (1 + slack) + 1e-300 and k <= hi * (1 + slack) + 1e-300
        rows.append(Lemma32Row(t, lo, k, hi, bool(ok)))
    bad = sum(not r.passed for r in rows)
    return Lemma32Report(p, q, tuple(rows), bad == 0, bad)


def _h_majorant_norm(gs, p, q, n_points=H_GRID_POINTS, floor=H_GRID_FLOOR):
    """Upper bound on ``||Hg||_{p,q}`` where ``Hg(t) = ||g||_{b(t)}``.

    ``Hg`` is nonincreasing, so on each cell ``[t_{i-1}, t_i)`` of a
    geometric grid it is bounded by its left value. Below the first grid
    point ``Hg(s) <= g#(0) + ||g||_{2p} s**(-1/(2p))``, integrated in closed
    form.
    """
    ts = np.logspace(math.log2(floor), 0.0, n_points, base=2.0)
    ts[-1] = 1.0
    h = b_norm(gs, p, ts)
    A, B = float(gs.values[0]), p_norm(gs, 2.0 * p)
    t0 = ts[0]
    vals = h[:-1]
    if q == math.inf:
        head = A * t0 ** (1.0 / p) + B * t0 ** (1.0 / (2.0 * p))
        return max(head, float(np.max(np.power(ts[1:], 1.0 / p) * vals)))
    r = q / p
    cq = max(1.0, 2.0 ** (q - 1.0))
    head = cq * (A ** q * t0 ** r + 2.0 * B ** q * t0 ** (r / 2.0))
    body = float(np.dot(np.power(vals, q), np.power(ts[1:], r) - np.power(ts[:-1], r)))
    return (head + body) ** (1.0 / q)


@dataclass(frozen=True)
class KInterpolationReport:
    p: float
    q: float
    hypothesis: bool
    norm_f: float
    norm_g: float
    norm_hg: float
    bound_conclusion: float
    bound_hardy: float
    conclusion_ok: bool
    hardy_ok: bool
    chain_ok: bool
    passed: bool
    status: str


def common_split_family(*fns):
    """Shared cut points and truncation levels for comparing K-functionals."""
    steps = [as_step(f) for f in fns]
    cuts = np.unique(np.concatenate([s.breakpoints for s in steps]))
    levels = np.unique(np.concatenate([default_levels(s) for s in steps]))
    return cuts, levels


def verify_k_interpolation(f, g, p, q, t_grid=None, slack=SANDWICH_SLACK):
    """Lorentz ``L_{p,q}`` as a ``(p/2, 2p)``-K-interpolation space.

    First checks ``K_{p/2,2p}(f,t) <= K_{p/2,2p}(g,t)`` on the grid; if that
    fails the report has ``status='hypothesis-failed'``. Otherwise asserts
    ``||f||_{p,q} <= 128**(1/min(p,q)) ||g||_{p,q}`` and
    ``||Hg||_{p,q} <= 32**(1/min(p,q)) ||g||_{p,q}``.
    """
    fs, gs = as_step(f), as_step(g)
    ts = DENSE_T_GRID if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    cuts, levels = common_split_family(fs, gs)
    kf = k_functional(fs, p=p / 2.0, q=2.0 * p, t=ts, cuts=cuts, levels=levels)
    kg = k_functional(gs, p=p / 2.0, q=2.0 * p, t=ts, cuts=cuts, levels=levels)
    hyp = bool(np.all(kf <= kg))
    nf, ng = lorentz_norm(fs, p, q), lorentz_norm(gs, p, q)
    m = min(p, q)
    bc, bh = 128.0 ** (1.0 / m), 32.0 ** (1.0 / m)
    if not hyp:
        return KInterpolationReport(p, q, False, nf, ng, math.nan, bc * ng, bh * ng,
                                    False, False, False, True, "hypothesis-failed")
    nh = float(_h_majorant_norm(gs, p, q))
    c_ok = nf <= bc * ng * (1 + slack)
    h_ok = nh <= bh * ng * (1 + slack)
    chain_ok = nf <= 2.0 ** (2.0 / p) * nh * (1 + slack)
    return KInterpolationReport(p, q, True, nf, ng, nh, bc * ng, bh * ng,
                                bool(c_ok), bool(h_ok), bool(chain_ok),
                                bool(c_ok and h_ok), "checked")
