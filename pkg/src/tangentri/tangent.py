"""Adapted sequences on dyadic filtrations and their decoupled versions.

Coordinates are signs ``eps_i`` in ``{-1, +1}``, encoded as bits (1 for +1)
with the first coordinate most significant. An :class:`AdaptedSequence`
stores ``f_k`` as a table over the ``2**(width*k)`` nodes of level ``k``, so
``f_k`` depends on the first ``k`` steps by construction. Width 1 is the
sign-path space; width 2 is the product space with coordinates
``(eps_k, eps'_k)`` revealed together at step ``k`` (``eps_k`` in the high
bit).

The decoupled version of ``(f_k)`` is ``fbar_k(eps, eps') = f_k(eps_<k,
eps'_k)`` on the product space, with ``G = sigma(eps)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .measure import (DiscreteRandomVariable, SizingError, canonicalize,
                      merge_atoms)

MAX_DEPTH = 22
MAX_PAIR_DEPTH = 11
MAX_DP_SUPPORT = 4096
CI_CHECK_DEPTH = 6


class DecouplingError(AssertionError):
    """A decoupled pair failed its tangency or (CI) postcondition."""


def prefix_index(prefix):
    """Sign tuple to node index (first sign most significant, +1 -> bit 1)."""
    j = 0
    for e in prefix:
        if e not in (-1, 1):
            raise ValueError("coordinates must be -1 or +1")
        j = 2 * j + (e > 0)
    return j


def index_prefix(j, length):
    return tuple(1 if (j >> (length - 1 - i)) & 1 else -1 for i in range(length))


def _deinterleave(J, k):
    """Split width-2 node indices at level ``k`` into ``(eps, eps')`` indices."""
    J = np.asarray(J, dtype=np.int64)
    e = np.zeros_like(J)
    e2 = np.zeros_like(J)
    for i in range(k):
        pair = (J >> (2 * (k - 1 - i))) & 3
        e = 2 * e + (pair >> 1)
        e2 = 2 * e2 + (pair & 1)
    return e, e2


@dataclass(frozen=True)
class DyadicSpace:
    """``{-1, +1}**depth`` with the uniform measure."""

    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    @property
    def n_paths(self):
        return 1 << self.depth

    def paths(self):
        """All sign paths as a ``(2**depth, depth)`` int array, in index order."""
        if self.depth > MAX_DEPTH:
            raise SizingError(f"depth {self.depth} exceeds {MAX_DEPTH}")
        idx = np.arange(self.n_paths, dtype=np.int64)[:, None]
        shifts = np.arange(self.depth - 1, -1, -1, dtype=np.int64)[None, :]
        return 2 * ((idx >> shifts) & 1) - 1


class AdaptedSequence:
    """``(f_1, ..., f_n)`` with ``f_k`` a table over level-``k`` nodes."""

    def __init__(self, tables, width=1):
        if width not in (1, 2):
            raise ValueError("width must be 1 or 2")
        tables = [np.array(t, dtype=np.float64).ravel() for t in tables]
        if not tables:
            raise ValueError("an adapted sequence needs depth >= 1")
        if len(tables) * width > MAX_DEPTH:
            raise SizingError(f"depth {len(tables)} x width {width} exceeds {MAX_DEPTH} coordinates")
        for k, t in enumerate(tables, start=1):
            if t.size != 1 << (width * k):
                raise ValueError(f"level {k} table must have {1 << (width * k)} entries")
            if not np.all(np.isfinite(t)):
                raise ValueError(f"level {k} has non-finite values")
            t.setflags(write=False)
        self.tables = tuple(tables)
        self.width = width

    @property
    def depth(self):
        return len(self.tables)

    def __repr__(self):
        return f"AdaptedSequence(depth={self.depth}, width={self.width})"

    @classmethod
    def from_functions(cls, depth, funcs):
        """Tabulate ``funcs``: one callable per level taking a sign prefix, or
        a single callable ``f(k, prefix)``."""
        if depth > MAX_DEPTH:
            raise SizingError(f"depth {depth} exceeds {MAX_DEPTH}")
        if callable(funcs):
            fn = funcs
            funcs = [lambda pre, k=k: fn(k, pre) for k in range(1, depth + 1)]
        if len(funcs) != depth:
            raise ValueError("need one evaluator per level")
        tables = []
        for k, fk in enumerate(funcs, start=1):
            tables.append([float(fk(pre)) for pre in itertools.product((-1, 1), repeat=k)])
        return cls(tables)

    @classmethod
    def rademacher(cls, depth, weights=None):
        """``f_k = w_k r_k``."""
        w = np.ones(depth) if weights is None else np.asarray(weights, dtype=np.float64)
        return cls([w[k - 1] * np.tile([-1.0, 1.0], 1 << (k - 1)) for k in range(1, depth + 1)])

    def value(self, k, prefix):
        """``f_k`` at a sign prefix of length ``k`` (``width`` signs per step)."""
        return float(self.tables[k - 1][prefix_index(prefix)])

    def scale(self, c):
        return AdaptedSequence([c * t for t in self.tables], self.width)

    def negate(self):
        return self.scale(-1.0)

    def flat(self):
        offsets = np.zeros(self.depth, dtype=np.int_)
        offsets[1:] = np.cumsum([t.size for t in self.tables[:-1]])
        return np.concatenate(self.tables), offsets

    def children(self, k):
        """Level-``k`` values grouped by parent node: shape ``(nodes, 2**width)``."""
        return self.tables[k - 1].reshape(-1, 1 << self.width)


@dataclass(frozen=True, eq=False)
class PredictableMultiplier:
    """``v_k`` as a table over sign prefixes of length ``k - 1``."""

    tables: tuple

    def __init__(self, tables):
        tabs = []
        for k, t in enumerate(tables, start=1):
            t = np.array(t, dtype=np.float64).ravel()
            if t.size != 1 << (k - 1):
                raise ValueError(f"v_{k} must have {1 << (k - 1)} entries")
            t.setflags(write=False)
            tabs.append(t)
        object.__setattr__(self, "tables", tuple(tabs))

    @property
    def depth(self):
        return len(self.tables)

    def times_rademacher(self):
        """The martingale transform ``f_k = v_k r_k``."""
        signs = np.array([-1.0, 1.0])
        return AdaptedSequence([np.outer(v, signs).ravel() for v in self.tables])


def lift(seq):
    """A width-1 sequence seen on the product filtration (ignores ``eps'``)."""
    if seq.width == 2:
        return seq
    tabs = []
    for k, t in enumerate(seq.tables, start=1):
        e, _ = _deinterleave(np.arange(1 << (2 * k)), k)
        tabs.append(t[e])
    return AdaptedSequence(tabs, width=2)


class DecoupledPair:
    """``(f_k)`` and its decoupled version ``fbar_k(eps, eps') = f_k(eps_<k, eps'_k)``."""

    def __init__(self, base):
        if base.width != 1:
            raise ValueError("decoupling needs a sequence on the sign-path space")
        self.base = base
        self._marginal = None

    @property
    def depth(self):
        return self.base.depth

    def __repr__(self):
        return f"DecoupledPair(depth={self.depth})"

    def value(self, k, eps, eps_prime):
        """``fbar_k`` at full (or at least length-``k``) sign paths."""
        pre = tuple(eps[: k - 1]) + (eps_prime[k - 1],)
        return self.base.value(k, pre)

    @property
    def marginal(self):
        """``(fbar_k)`` as a width-2 sequence on the product filtration."""
        if self._marginal is None:
            if 2 * self.depth > MAX_DEPTH:
                raise SizingError(f"product tables at depth {self.depth} exceed the cap")
            tabs = []
            for k, t in enumerate(self.base.tables, start=1):
                e, e2 = _deinterleave(np.arange(1 << (2 * k)), k)
                tabs.append(t[2 * (e >> 1) + (e2 & 1)])
            self._marginal = AdaptedSequence(tabs, width=2)
        return self._marginal

    @property
    def lifted(self):
        return lift(self.base)

    def increments_given(self, e):
        """``fbar_k`` over all ``eps'`` for the base path index ``e``: ``(2**n, n)``."""
        n = self.depth
        e2 = np.arange(1 << n, dtype=np.int64)
        cols = []
        for k, t in enumerate(self.base.tables, start=1):
            cols.append(t[2 * (e >> (n - k + 1)) + ((e2 >> (n - k)) & 1)])
        return np.stack(cols, axis=1)


def _node_index(seq, k, node):
    if isinstance(node, (int, np.integer)):
        return int(node)
    node = tuple(node)
    if seq.width == 2:
        node = tuple(itertools.chain.from_iterable(node))
    if len(node) != seq.width * (k - 1):
        raise ValueError("node must be a prefix of length k - 1")
    return prefix_index(node)


def conditional_distribution(seq, k, node):
    """Law of ``f_k`` given the level-``(k-1)`` node, as merged ``(value, prob)`` atoms."""
    if not 1 <= k <= seq.depth:
        raise ValueError(f"level must be in 1..{seq.depth}")
    row = seq.children(k)[_node_index(seq, k, node)]
    v, p = merge_atoms(row, np.full(row.size, 1.0 / row.size))
    return list(zip(v.tolist(), p.tolist()))


def _canonical_rows(seq, k):
    return np.sort(canonicalize(seq.children(k)), axis=1)


def check_tangent(a, b):
    """True iff ``L(a_k | F_{k-1}) = L(b_k | F_{k-1})`` at every node and level.

    A width-1 sequence compared against a width-2 one is lifted to the
    product filtration first.
    """
    if a.depth != b.depth:
        raise ValueError("sequences must have equal depth")
    if a.width != b.width:
        a, b = lift(a), lift(b)
    for k in range(1, a.depth + 1):
        # each child has mass 2**-width, so sorted rows are the laws
        if not np.array_equal(_canonical_rows(a, k), _canonical_rows(b, k)):
            return False
    return True


def is_conditionally_symmetric(seq):
    return check_tangent(seq, seq.negate())


@dataclass(frozen=True)
class CIReport:
    passed: bool
    marginal_ok: bool
    factorization_ok: bool
    checked_paths: int


def check_ci(pair):
    """Exhaustive check of condition (CI) with ``G = sigma(eps)``.

    For every base path ``eps``: (i) for each ``k`` and every ``eps'``, the
    law of ``fbar_k`` given ``G`` equals its law given ``F_{k-1}`` at the
    node ``(eps_<k, eps'_<k)``; (ii) the joint law of ``(fbar_1..fbar_n)``
    over ``eps'`` is the product of its marginals.
    """
    n = pair.depth
    if n > MAX_PAIR_DEPTH:
        raise SizingError(f"depth {n} exceeds {MAX_PAIR_DEPTH} for pair enumeration")
    marg = pair.marginal
    f_rows = [_canonical_rows(marg, k) for k in range(1, n + 1)]
    e2 = np.arange(1 << n, dtype=np.int64)
    marginal_ok = factor_ok = True
    for e in range(1 << n):
        vals = canonicalize(pair.increments_given(e))
        probs = []
        for k in range(1, n + 1):
            col = vals[:, k - 1]
            # law given G: each eps' path has mass 2**-n
            g_law = _law_counts(col)
            J = np.zeros_like(e2)
            for i in range(1, k):
                J = 4 * J + 2 * ((e >> (n - i)) & 1) + ((e2 >> (n - i)) & 1)
            # law given F_{k-1} at every node this eps can reach
            for row in np.unique(f_rows[k - 1][J], axis=0):
                if not _same_law(g_law, row):
                    marginal_ok = False
                    break
            probs.append(g_law)
        joint, counts = np.unique(vals, axis=0, return_counts=True)
        pj = counts / float(1 << n)
        prod = np.ones(joint.shape[0])
        for k in range(n):
            lv, lp = probs[k]
            prod *= lp[np.searchsorted(lv, joint[:, k])]
        if not (np.array_equal(pj, prod) and math.fsum(prod.tolist()) == 1.0):
            factor_ok = False
        if not (marginal_ok and factor_ok):
            break
    return CIReport(marginal_ok and factor_ok, marginal_ok, factor_ok, 1 << (2 * n))


def _law_counts(col):
    v, c = np.unique(col, return_counts=True)
    return v, c / float(col.size)


def _same_law(law, row):
    v, p = np.unique(row, return_counts=True)
    return np.array_equal(v, law[0]) and np.array_equal(p / float(row.size), law[1])


def decouple(seq, check="auto"):
    """Decoupled version of ``seq`` on the product space.

    With ``check=True`` (or ``"auto"`` at depth <= 6) the postconditions are
    verified exhaustively: ``(f_k)`` and ``(fbar_k)`` are tangent on the
    product filtration and ``(fbar_k)`` satisfies (CI) with ``G = sigma(eps)``.
    """
    if seq.depth > MAX_PAIR_DEPTH:
        raise SizingError(f"depth {seq.depth} exceeds {MAX_PAIR_DEPTH} for exact pairs")
    pair = DecoupledPair(seq)
    if check is True or (check == "auto" and seq.depth <= CI_CHECK_DEPTH):
        if not check_tangent(seq, pair.marginal):
            raise DecouplingError("decoupled sequence is not tangent to the base")
        if not check_ci(pair).passed:
            raise DecouplingError("decoupled sequence violates (CI)")
    return pair


def _stats(obj):
    if isinstance(obj, DecoupledPair):
        if obj.depth > MAX_PAIR_DEPTH:
            raise SizingError(f"pair depth {obj.depth} exceeds {MAX_PAIR_DEPTH}")
        flat, off = obj.base.flat()
        s, mi, mp = kernels.pair_stats(flat, off, obj.depth)
        return s, mi, mp, 2 * obj.depth
    if obj.width != 1:
        raise ValueError("path enumeration runs on width-1 sequences")
    flat, off = obj.flat()
    s, mi, mp = kernels.path_stats(flat, off, obj.depth)
    return s, mi, mp, obj.depth


def _law(outcomes, bits):
    return DiscreteRandomVariable.from_outcomes(outcomes, np.full(outcomes.size, 2.0 ** -bits))


def _dp_merge(node, values, probs):
    """Merge atoms with equal ``(node, canonical value)``; inputs flat."""
    values = canonicalize(values)
    order = np.lexsort((values, node))
    node, values, probs = node[order], values[order], probs[order]
    new = np.ones(node.size, dtype=bool)
    new[1:] = (node[1:] != node[:-1]) | (values[1:] != values[:-1])
    starts = np.nonzero(new)[0]
    merged_p = np.add.reduceat(probs, starts)
    node, values = node[starts], values[starts]
    counts = np.bincount(node)
    if counts.size and counts.max() > MAX_DP_SUPPORT:
        raise SizingError(f"a node carries {counts.max()} atoms (> {MAX_DP_SUPPORT})")
    return node, values, merged_p


def _dp_sum(obj):
    """Backward induction over the sign tree.

    Base: ``D_k(j) = 1/2 sum_b shift(D_{k+1}(2j+b), f_k(2j+b))``.
    Decoupled: ``D_k(j) = law(f_k(j, eps'_k)) * (1/2 sum_b D_{k+1}(2j+b))``
    (convolution), since given ``eps_<k`` the step ``fbar_k`` only sees
    ``eps'_k``.
    """
    decoupled = isinstance(obj, DecoupledPair)
    seq = obj.base if decoupled else obj
    if seq.width != 1:
        raise ValueError("the level DP runs on width-1 sequences")
    n = seq.depth
    node = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(node.size)
    probs = np.ones(node.size)
    for k in range(n, 0, -1):
        t = seq.tables[k - 1]
        if decoupled:
            node, values, probs = _dp_merge(node >> 1, values, 0.5 * probs)
            node = np.repeat(node, 2)
            values = np.repeat(values, 2) + t[2 * node + np.tile([0, 1], node.size // 2)]
            probs = np.repeat(probs, 2) * 0.5
        else:
            values = values + t[node]
            node, probs = node >> 1, 0.5 * probs
        node, values, probs = _dp_merge(node, values, probs)
    return DiscreteRandomVariable(values, probs)


def sum_distribution(obj, mode="exact"):
    """Exact law of ``sum f_k`` (sequence) or ``sum fbar_k`` (decoupled pair).

    ``mode='exact'`` enumerates every path (``2**n`` or ``4**n``);
    ``mode='dp'`` runs backward induction over the sign tree with atoms
    rounded to 12 significant digits and at most 4096 atoms per node.
    """
    if mode == "exact":
        s, _, _, bits = _stats(obj)
        return _law(s, bits)
    if mode == "dp":
        return _dp_sum(obj)
    raise ValueError("mode must be 'exact' or 'dp'")


def maximal_function(obj, variant="increments"):
    """Exact law of ``max_k |f_k|`` (default) or ``max_k |S_k|`` (``'partial_sums'``)."""
    _, mi, mp, bits = _stats(obj)
    if variant == "increments":
        return _law(mi, bits)
    if variant == "partial_sums":
        return _law(mp, bits)
    raise ValueError("variant must be 'increments' or 'partial_sums'")


def tail_probs(law, ts):
    """``P(X >= t)`` for each ``t``; exact for dyadic atoms."""
    v = law.values
    order = np.argsort(v)
    v, p = v[order], law.probs[order]
    suffix = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]])
    return suffix[np.searchsorted(v, np.asarray(ts, dtype=np.float64), side="left")]


@dataclass(frozen=True)
class TailReport:
    t: tuple
    lhs: tuple
    rhs: tuple
    passed: bool
    violations: int
    partial_sum_violations: int


def verify_tail_comparison(seq, t_grid=None):
    """``P(f* >= t) <= 2 P(fbar* >= t)`` with ``f* = max_k |f_k|``.

    The default grid is every positive atom of either maximal function,
    which covers all ``t > 0`` because both tails are left-continuous steps.
    The partial-sum variant is counted but not asserted.
    """
    pair = decouple(seq, check=False)
    f_star = maximal_function(seq)
    g_star = maximal_function(pair)
    f_part = maximal_function(seq, "partial_sums")
    g_part = maximal_function(pair, "partial_sums")
    if t_grid is None:
        ts = np.union1d(f_star.values, g_star.values)
        ts = ts[ts > 0]
    else:
        ts = np.asarray(t_grid, dtype=np.float64)
    lhs, rhs = tail_probs(f_star, ts), tail_probs(g_star, ts)
    bad = int(np.sum(lhs > 2 * rhs))
    if t_grid is None:
        tp = np.union1d(f_part.values, g_part.values)
        tp = tp[tp > 0]
    else:
        tp = ts
    part_bad = int(np.sum(tail_probs(f_part, tp) > 2 * tail_probs(g_part, tp)))
    return TailReport(tuple(ts.tolist()), tuple(lhs.tolist()), tuple(rhs.tolist()),
                      bad == 0, bad, part_bad)


@dataclass(frozen=True)
class LevyReport:
    status: str
    passed: bool
    checks: int
    violations: int
    one_sided_violations: int
    mixed_violations: int


def _tails_at(x, ts):
    xs = np.sort(x)
    return (xs.size - np.searchsorted(xs, ts, side="left")) / float(xs.size)


def verify_levy(pair, t_grid=None):
    """Conditional Levy inequalities for ``N_k = sum_{j<=k} fbar_j`` given ``G``.

    Needs a conditionally symmetric base (else ``status='not-applicable'``).
    For each base path and each ``t`` asserts
    ``P(max_k |N_k| >= t | G) <= 2 P(|N_n| >= t | G)`` and
    ``P(max_k N_k >= t | G) <= 2 P(N_n >= t | G)``. The mixed form
    ``P(max_k |N_k| >= t | G) <= 2 P(N_n >= t | G)`` is only counted.
    The default grid is all positive values the statistics take given that
    path, which covers every ``t > 0``.
    """
    if not isinstance(pair, DecoupledPair):
        pair = decouple(pair, check=False)
    if not is_conditionally_symmetric(pair.base):
        return LevyReport("not-applicable", True, 0, 0, 0, 0)
    n = pair.depth
    checks = bad = bad1 = mixed = 0
    for e in range(1 << n):
        inc = pair.increments_given(e)
        partial = np.cumsum(inc, axis=1)
        total = partial[:, -1]
        max_abs = np.max(np.abs(partial), axis=1)
        max_up = np.max(partial, axis=1)
        if t_grid is None:
            ts = np.unique(np.concatenate([max_abs, max_up, np.abs(total)]))
            ts = ts[ts > 0]
        else:
            ts = np.asarray(t_grid, dtype=np.float64)
        a = _tails_at(max_abs, ts)
        b = _tails_at(np.abs(total), ts)
        c = _tails_at(max_up, ts)
        d = _tails_at(total, ts)
        checks += 2 * ts.size
        bad += int(np.sum(a > 2 * b))
        bad1 += int(np.sum(c > 2 * d))
        mixed += int(np.sum(a > 2 * d))
    return LevyReport("checked", bad == 0 and bad1 == 0, checks, bad, bad1, mixed)


@dataclass(frozen=True)
class KolmogorovReport:
    q: float
    passed: bool
    checks: int
    violations: int
    e_smax_q: float
    e_ximax_q: float
    worst_margin: float


def _product_enumeration(xis):
    total = 1
    for x in xis:
        total *= len(x)
    if total > 1 << 22:
        raise SizingError(f"{total} joint outcomes exceeds 2**22")
    s = np.zeros(1)
    smax = np.zeros(1)
    ximax = np.zeros(1)
    w = np.ones(1)
    for x in xis:
        v, p = x.values, x.probs
        s = (s[:, None] + v[None, :]).ravel()
        smax = np.maximum(np.repeat(smax, v.size), np.abs(s))
        ximax = np.maximum(np.repeat(ximax, v.size), np.tile(np.abs(v), w.size))
        w = (w[:, None] * p[None, :]).ravel()
    return s, smax, ximax, w


def verify_kolmogorov_converse(xis, q, t_grid=None, slack=1e-12):
    """``P(S* >= t) >= 2**-q (1 - 2**(2q) (t**q + E xi*^q) / E S*^q)``.

    ``xis`` are independent symmetric variables, enumerated jointly. Without
    a grid, every ``t`` in ``(a_i, a_{i+1}]`` between consecutive atoms of
    ``S*`` is covered by comparing ``P(S* >= a_{i+1})`` with the right side
    at ``a_i``, where it is largest.
    """
    for x in xis:
        if not x.same_law(x.scale(-1.0)):
            raise ValueError("Kolmogorov's converse needs symmetric variables")
    _, smax, ximax, w = _product_enumeration(xis)
    es = float(np.dot(w, np.power(smax, q)))
    ex = float(np.dot(w, np.power(ximax, q)))
    law = DiscreteRandomVariable.from_outcomes(smax, w)

    def rhs(t):
        if es == 0:
            return -math.inf
        return 2.0 ** -q * (1.0 - 2.0 ** (2 * q) * (np.power(t, q) + ex) / es)

    if t_grid is None:
        atoms = law.values[law.values > 0]
        right = atoms
        left = np.concatenate([[0.0], atoms[:-1]])
        lhs = tail_probs(law, right)
        r = rhs(left)
    else:
        ts = np.asarray(t_grid, dtype=np.float64)
        lhs, r = tail_probs(law, ts), rhs(ts)
    margin = lhs - r
    bad = int(np.sum(margin < -slack))
    worst = float(np.min(margin)) if margin.size else math.inf
    return KolmogorovReport(float(q), bad == 0, int(margin.size), bad, es, ex, worst)


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    n_samples: int
    seed: int


def monte_carlo(obj, fn, n_samples=100_000, seed=0, statistic="sum"):
    """Seeded estimate of ``E fn(statistic)``; reporting only, never asserted.

    Uses numpy's counter-based Philox generator. ``statistic`` is ``'sum'``,
    ``'max_increment'`` or ``'max_partial'``.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    decoupled = isinstance(obj, DecoupledPair)
    seq = obj.base if decoupled else obj
    n = seq.depth
    e = rng.integers(0, 1 << n, size=n_samples, dtype=np.int64)
    e2 = rng.integers(0, 1 << n, size=n_samples, dtype=np.int64) if decoupled else None
    s = np.zeros(n_samples)
    mi = np.zeros(n_samples)
    mp = np.zeros(n_samples)
    for k, t in enumerate(seq.tables, start=1):
        if decoupled:
            v = t[2 * (e >> (n - k + 1)) + ((e2 >> (n - k)) & 1)]
        else:
            v = t[e >> (n - k)]
        s += v
        np.maximum(mi, np.abs(v), out=mi)
        np.maximum(mp, np.abs(s), out=mp)
    stat = {"sum": s, "max_increment": mi, "max_partial": mp}[statistic]
    y = np.asarray(fn(stat), dtype=np.float64)
    return MonteCarloResult(float(y.mean()), float(y.std(ddof=1) / math.sqrt(n_samples)),
                            n_samples, seed)
