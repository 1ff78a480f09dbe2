"""Harnesses that instantiate the decoupling and interpolation results exactly.

Harnesses only assert inequalities whose constants are explicit. The
universal constants of the decoupling theorems are not known numerically,
so those runs only check finiteness and report empirical constants.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lorentz import (DEFAULT_T_GRID, k_functional, common_split_family,
                      lorentz_norm, verify_k_interpolation)
from .measure import DiscreteRandomVariable, SizingError, as_step, p_norm
from .orlicz import (BISECT_RTOL, GrowthClassError, SANDWICH_SLACK, hinge,
                     orlicz_norm, phi_t, verify_growth_class)
from .tangent import (MAX_DEPTH, MAX_PAIR_DEPTH, AdaptedSequence,
                      PredictableMultiplier, decouple, sum_distribution)

EXACT = "exact"
GRID_UPPER = "grid-upper-bound"
BISECTION = f"bisection({BISECT_RTOL:g})"
KINDS = ("rademacher", "predictable-multiplier", "random-adapted")


def monte_carlo_label(n, stderr):
    return f"monte-carlo({n}, {stderr:.6g})"


def labelled(value, provenance):
    """A report number with its provenance; non-finite values become strings."""
    if value is None:
        return {"value": None, "provenance": provenance}
    value = float(value)
    if not math.isfinite(value):
        value = "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return {"value": value, "provenance": provenance}


def sequence_to_dict(seq):
    return {"width": seq.width, "tables": [t.tolist() for t in seq.tables]}


def sequence_from_dict(d):
    return AdaptedSequence(d["tables"], width=d.get("width", 1))


@dataclass(frozen=True)
class CorpusSpec:
    """Seeded family of adapted sequences on the sign-path space."""

    count: int
    depth_min: int = 1
    depth_max: int = 6
    kind: str = "predictable-multiplier"
    value_range: tuple = (-3, 3)
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("corpus count must be >= 1")
        if self.kind not in KINDS:
            raise ValueError(f"corpus kind must be one of {KINDS}")
        if not 1 <= self.depth_min <= self.depth_max:
            raise ValueError("need 1 <= depth_min <= depth_max")
        if self.depth_max > MAX_PAIR_DEPTH:
            raise SizingError(f"corpus depth {self.depth_max} exceeds the paired cap {MAX_PAIR_DEPTH}")
        lo, hi = self.value_range
        if lo > hi:
            raise ValueError("value_range must satisfy lo <= hi")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def params(self):
        return {"count": self.count, "depth_min": self.depth_min, "depth_max": self.depth_max,
                "kind": self.kind, "value_range": list(self.value_range), "seed": self.seed}

    def generate(self):
        rng = np.random.Generator(np.random.Philox(self.seed))
        lo, hi = self.value_range
        out = []
        for _ in range(self.count):
            n = int(rng.integers(self.depth_min, self.depth_max + 1))
            if self.kind == "rademacher":
                out.append(AdaptedSequence.rademacher(n))
            elif self.kind == "predictable-multiplier":
                v = [rng.integers(lo, hi + 1, size=1 << (k - 1)).astype(float)
                     for k in range(1, n + 1)]
                out.append(PredictableMultiplier(v).times_rademacher())
            else:
                out.append(AdaptedSequence([rng.integers(lo, hi + 1, size=1 << k).astype(float)
                                            for k in range(1, n + 1)]))
        return out


@dataclass(frozen=True)
class RatioInstance:
    instance_id: int
    params: dict
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    provenance: str = EXACT
    payload: dict = field(default=None, compare=False)

    def to_dict(self):
        d = {"instance_id": self.instance_id, "params": self.params,
             "lhs": labelled(self.lhs, self.provenance),
             "rhs": labelled(self.rhs, self.provenance),
             "ratio": labelled(self.ratio, self.provenance), "pass": self.passed}
        if not self.passed and self.payload is not None:
            d["replay"] = self.payload
        return d


@dataclass(frozen=True)
class RatioReport:
    """Per-instance ratios plus aggregates; ``0/0`` instances counted apart."""

    experiment: str
    params: dict
    instances: tuple
    zero_zero: int
    max_ratio: float
    median_ratio: float
    passed: bool
    extra: dict = field(default_factory=dict)

    def failures(self):
        return [i for i in self.instances if not i.passed]

    def to_dict(self):
        d = {"experiment": self.experiment, "params": self.params,
             "instances": [i.to_dict() for i in self.instances],
             "zero_zero": self.zero_zero,
             "max_ratio": labelled(self.max_ratio, EXACT),
             "median_ratio": labelled(self.median_ratio, EXACT),
             "pass": self.passed}
        d.update(self.extra)
        return d


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return None if lhs == 0 else math.inf


def _report(name, params, rows, extra=None):
    ratios = [r.ratio for r in rows if r.ratio is not None]
    zz = sum(r.ratio is None for r in rows)
    mx = max(ratios) if ratios else math.nan
    md = float(np.median(ratios)) if ratios else math.nan
    return RatioReport(name, params, tuple(rows), zz, mx, md,
                       all(r.passed for r in rows), extra or {})


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _laws(seq):
    pair = decouple(seq, check=False)
    return sum_distribution(seq), sum_distribution(pair)


def _all_laws(corpus, threads):
    seqs = corpus.generate()
    return seqs, _map(_laws, seqs, threads)


def _finite_row(i, params, lhs, rhs, seq):
    r = _ratio(lhs, rhs)
    ok = r is None or math.isfinite(r)
    return RatioInstance(i, params, lhs, rhs, r, ok, EXACT,
                         None if ok else sequence_to_dict(seq))


def _certify_Fq(phi, q):
    rep = verify_growth_class(phi, q, "F")
    if not (rep.analytic or rep.passed):
        raise GrowthClassError(f"{phi.name} is not certified in F_{q:g} (grid ratio {rep.max_ratio:.6g})")
    return "analytic" if rep.analytic else "grid"


def run_theorem11(corpus, phi, q, threads=1, explore=False):
    """Ratios ``E Phi(|sum f_k|) / E Phi(|sum fbar_k|)`` over a corpus.

    Requires ``Phi`` in ``F_q``. Asserts only that every ratio is finite and
    reports ``C_emp = max ratio**(1/(1+q))``. With ``explore=True`` an
    uncertified ``Phi`` is accepted and nothing is asserted.
    """
    how = "none" if explore else _certify_Fq(phi, q)
    seqs, laws = _all_laws(corpus, threads)
    rows = []
    for i, (seq, (a, b)) in enumerate(zip(seqs, laws)):
        lhs = phi.expect(a.values, a.probs, 1.0)
        rhs = phi.expect(b.values, b.probs, 1.0)
        row = _finite_row(i, {"depth": seq.depth}, lhs, rhs, seq)
        if explore and not row.passed:
            row = RatioInstance(row.instance_id, row.params, lhs, rhs, row.ratio, True)
        rows.append(row)
    rep = _report("theorem11", {"phi": phi.name, "q": q, "corpus": corpus.params()}, rows)
    c_emp = rep.max_ratio ** (1.0 / (1.0 + q)) if math.isfinite(rep.max_ratio) else rep.max_ratio
    rep.extra.update({"certificate": how, "c_emp": labelled(c_emp, EXACT)})
    return rep


def run_moment_inequality(corpus, p_list=(1.0, 2.0), threads=1):
    """Exact ``||sum f_k||_p / ||sum fbar_k||_p`` for ``p`` in the list and infinity."""
    ps = sorted(set(float(p) for p in p_list) | {math.inf})
    seqs, laws = _all_laws(corpus, threads)
    rows = []
    for i, (seq, (a, b)) in enumerate(zip(seqs, laws)):
        for p in ps:
            rows.append(_finite_row(len(rows), {"instance": i, "depth": seq.depth,
                                                "p": p if math.isfinite(p) else "inf"},
                                    p_norm(a, p), p_norm(b, p), seq))
    return _report("moment", {"p": [p if math.isfinite(p) else "inf" for p in ps],
                              "corpus": corpus.params()}, rows)


COROLLARY15_PQ = ((1.0, 1.0), (2.0, 1.0), (2.0, math.inf), (0.5, 0.5))


def run_corollary15(corpus, pq_list=COROLLARY15_PQ, threads=1):
    """Exact ``||sum f_k||_{p,q} / ||sum fbar_k||_{p,q}`` ratios."""
    seqs, laws = _all_laws(corpus, threads)
    rows = []
    for i, (seq, (a, b)) in enumerate(zip(seqs, laws)):
        for p, q in pq_list:
            rows.append(_finite_row(len(rows), {"instance": i, "depth": seq.depth, "p": p,
                                                "q": q if math.isfinite(q) else "inf"},
                                    lorentz_norm(a, p, q), lorentz_norm(b, p, q), seq))
    pq = [[p, q if math.isfinite(q) else "inf"] for p, q in pq_list]
    return _report("corollary15", {"pq": pq, "corpus": corpus.params()}, rows)


@dataclass(frozen=True)
class ChainReport:
    p: float
    q: float
    hypothesis: bool
    k_ok: bool
    worst_k_ratio: float
    factor: float
    delegated: object
    passed: bool
    status: str

    def to_dict(self):
        d = {"p": self.p, "q": self.q, "hypothesis": self.hypothesis, "k_ok": self.k_ok,
             "worst_k_ratio": labelled(self.worst_k_ratio, GRID_UPPER),
             "factor": labelled(self.factor, EXACT), "pass": self.passed,
             "status": self.status}
        if self.delegated is not None:
            r = self.delegated
            d["interpolation"] = {
                "p": r.p, "q": r.q, "status": r.status, "pass": r.passed,
                "norm_f": labelled(r.norm_f, EXACT), "norm_g": labelled(r.norm_g, EXACT),
                "norm_hg": labelled(r.norm_hg, GRID_UPPER),
                "bound_conclusion": labelled(r.bound_conclusion, EXACT),
                "bound_hardy": labelled(r.bound_hardy, EXACT)}
        return d


def run_theorem13_chain(f, g, p, q, t_grid=None, lorentz_q=None, slack=SANDWICH_SLACK):
    """Proof chain from Orlicz domination over ``Phi_t`` to norm domination.

    Checks ``||f||_{Phi_t} <= ||g||_{Phi_t}`` on the grid, then asserts
    ``K_{p,q}(f,t) <= 2**(2+1/p) K_{p,q}(g,t)``. When ``q = 4p`` the Lorentz
    space ``L_{2p,r}`` is a ``(p, q)``-K-interpolation space and the
    conclusion is delegated to :func:`verify_k_interpolation` with ``g``
    scaled by the chain factor; otherwise ``status`` records that no
    delegation applies.
    """
    fs, gs = as_step(f), as_step(g)
    ts = DEFAULT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    nf = np.array([orlicz_norm(fs, phi_t(p, q, t)) for t in ts])
    ng = np.array([orlicz_norm(gs, phi_t(p, q, t)) for t in ts])
    hyp = bool(np.all(nf <= ng * (1 + slack)))
    factor = 2.0 ** (2.0 + 1.0 / p)
    if not hyp:
        return ChainReport(p, q, False, False, math.nan, factor, None, True, "hypothesis-failed")
    cuts, levels = common_split_family(fs, gs)
    kf = k_functional(fs, p=p, q=q, t=ts, cuts=cuts, levels=levels)
    kg = k_functional(gs, p=p, q=q, t=ts, cuts=cuts, levels=levels)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(kf == 0, 0.0, kf / kg)
    worst = float(np.max(ratios))
    k_ok = bool(np.all(kf <= factor * kg * (1 + slack)))
    delegated, status = None, "no-delegation"
    if q == 4.0 * p:
        P = 2.0 * p
        delegated = verify_k_interpolation(fs, gs.scale(factor), P,
                                           P if lorentz_q is None else lorentz_q)
        status = "delegated"
    ok = k_ok and (delegated is None or delegated.passed)
    return ChainReport(p, q, True, k_ok, worst, factor, delegated, bool(ok), status)


def _block_sizes(k, N1):
    return [N1 >> (i - 1) for i in range(1, k + 1)]


def prop23_sequence(k, N1):
    """``f_j = v_j r_j`` with ``v`` equal to ``2**(i-1) 1_{Omega_{i-1}}`` on block ``i``."""
    m = _block_sizes(k, N1)
    n = sum(m)
    if n > MAX_DEPTH:
        raise SizingError(f"N_k = {n} exceeds the path cap {MAX_DEPTH}")
    starts = np.cumsum([0] + m)
    tables = []
    for i in range(1, k + 1):
        for j in range(starts[i - 1] + 1, starts[i] + 1):
            prefix = np.arange(1 << (j - 1), dtype=np.int64)
            inside = np.ones(prefix.size, dtype=bool)
            for level in range(1, i):
                lo, hi = starts[level - 1], starts[level]
                bits = [(prefix >> (j - 1 - c)) & 1 for c in range(lo + 1, hi + 1)]
                block = np.stack(bits)
                inside &= np.all(block == 1, axis=0) if level == 1 else np.all(block == block[0], axis=0)
            v = np.where(inside, float(1 << (i - 1)), 0.0)
            tables.append(np.outer(v, [-1.0, 1.0]).ravel())
    return AdaptedSequence(tables)


def _binomial_law(m, weight):
    vals = weight * (2.0 * np.arange(m + 1) - m)
    probs = np.array([math.comb(m, j) for j in range(m + 1)], dtype=np.float64) / 2.0 ** m
    return vals, probs


def _convolve(a, b):
    va, pa = a
    vb, pb = b
    v = (va[:, None] + vb[None, :]).ravel()
    p = (pa[:, None] * pb[None, :]).ravel()
    u, inv = np.unique(v, return_inverse=True)
    return u, np.bincount(inv.ravel(), weights=p)


def prop23_decoupled_law(k, N1):
    """Law of ``sum v_j r'_j`` by conditioning on the ``Omega`` level of ``eps``.

    Given ``eps`` in ``Omega_l \\ Omega_{l+1}`` blocks ``1..min(l+1, k)`` are
    active and the decoupled sum is a convolution of independent scaled
    Rademacher blocks. ``P(Omega_1) = 2**-N1`` and ``P(Omega_i | Omega_{i-1})
    = 2**(1 - m_i)``.
    """
    m = _block_sizes(k, N1)
    omega = [1.0, 2.0 ** -m[0]]
    for i in range(2, k + 1):
        omega.append(omega[-1] * 2.0 ** (1 - m[i - 1]))
    omega.append(0.0)
    values, probs = [], []
    law = (np.zeros(1), np.ones(1))
    for level in range(0, k + 1):
        if level + 1 <= k:
            law = _convolve(law, _binomial_law(m[level], float(1 << level)))
        weight = omega[level] - omega[level + 1]
        if weight > 0:
            values.append(law[0])
            probs.append(weight * law[1])
    v, p = np.concatenate(values), np.concatenate(probs)
    u, inv = np.unique(v, return_inverse=True)
    return DiscreteRandomVariable(u, np.bincount(inv.ravel(), weights=p))


@dataclass(frozen=True)
class CounterexampleReport:
    k: int
    N1: int
    offset: float
    lhs: float
    rhs: float
    ratio: float
    bound: float
    passed: bool
    brute_force: object
    agreement: object

    def to_dict(self):
        d = {"k": self.k, "n1": self.N1, "offset": labelled(self.offset, EXACT),
             "lhs": labelled(self.lhs, EXACT), "rhs": labelled(self.rhs, EXACT),
             "ratio": labelled(self.ratio, EXACT), "bound": labelled(self.bound, EXACT),
             "pass": self.passed}
        d["brute_force_rhs"] = (None if self.brute_force is None
                                else labelled(self.brute_force, EXACT))
        d["engines_agree"] = self.agreement
        return d


BRUTE_FORCE_MAX = 11


def counterexample_prop23(k, N1, scale=None, brute_force=None):
    """Exact ratio ``E Phi(|sum v_j r_j|) / E Phi((k/4)|sum v_j r'_j|)``.

    ``Phi(x) = (x - delta k N1)^+`` with ``delta = 1 - 1/(4 N1)``, so the
    hinge sits at ``k N1 - k/4``. Asserts ``ratio >= 2**(N1/2**(k-2)) /
    (k**2 N1)``. The left side is enumerated over all ``2**N_k`` paths; the
    right side uses the block convolution and, when ``N_k <= 11``, is
    cross-checked by enumerating all pairs.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if N1 < 2 ** k or N1 % (2 ** (k - 1)):
        raise ValueError(f"N1 must be a multiple of 2**(k-1) = {2 ** (k - 1)} and >= 2**k = {2 ** k}")
    scale = k / 4.0 if scale is None else float(scale)
    offset = k * N1 - k / 4.0
    phi = hinge(offset)
    seq = prop23_sequence(k, N1)
    a = sum_distribution(seq)
    b = prop23_decoupled_law(k, N1)
    lhs = phi.expect(a.values, a.probs, 1.0)
    rhs = phi.expect(scale * b.values, b.probs, 1.0)
    n = seq.depth
    brute, agree = None, None
    if brute_force is None:
        brute_force = n <= BRUTE_FORCE_MAX
    if brute_force:
        c = sum_distribution(decouple(seq, check=False))
        brute = phi.expect(scale * c.values, c.probs, 1.0)
        agree = bool(c.same_law(b) and abs(brute - rhs) <= 1e-12 * max(1.0, abs(rhs)))
    ratio = _ratio(lhs, rhs)
    bound = 2.0 ** (N1 / 2.0 ** (k - 2)) / (k * k * N1)
    ok = ratio is not None and ratio >= bound * (1 - SANDWICH_SLACK) and agree is not False
    return CounterexampleReport(k, N1, offset, lhs, rhs,
                                math.nan if ratio is None else ratio, bound, bool(ok),
                                brute, agree)


@dataclass(frozen=True)
class ConstantRow:
    experiment: str
    params: dict
    instances: int
    max_ratio: float
    median_ratio: float
    corpus: dict

    def to_dict(self):
        return {"experiment": self.experiment, "params": self.params,
                "instances": self.instances,
                "max_ratio": labelled(self.max_ratio, EXACT),
                "median_ratio": labelled(self.median_ratio, EXACT), "corpus": self.corpus}


def estimate_constants(sweep):
    """One row of empirical constants per (experiment, parameter) cell.

    ``sweep`` is an iterable of :class:`RatioReport`; rows split moment and
    Lorentz reports by their exponent parameters. Nothing is asserted.
    """
    cells = {}
    for rep in sweep:
        corpus = rep.params.get("corpus", {})
        for inst in rep.instances:
            key_params = {k: v for k, v in inst.params.items() if k in ("p", "q")}
            if rep.experiment == "theorem11":
                key_params = {"phi": rep.params["phi"], "q": rep.params["q"]}
            key = (rep.experiment, json.dumps(key_params, sort_keys=True),
                   json.dumps(corpus, sort_keys=True))
            cells.setdefault(key, []).append(inst.ratio)
    rows = []
    for (name, params, corpus), ratios in cells.items():
        vals = [r for r in ratios if r is not None]
        rows.append(ConstantRow(name, json.loads(params), len(ratios),
                                max(vals) if vals else math.nan,
                                float(np.median(vals)) if vals else math.nan,
                                json.loads(corpus)))
    return rows


# Verification suites: seeded corpora, one record per checked instance.

@dataclass
class SuiteResult:
    experiment: str
    params: dict
    records: list
    passed: bool
    summary: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {"experiment": self.experiment, "params": self.params,
                "records": self.records, "pass": self.passed,
                "summary": self.summary, "failures": self.failures}


def record(experiment, instance_id, params, lhs, rhs, ratio, passed, provenance=EXACT,
           rhs_provenance=None):
    return {"experiment": experiment, "instance_id": int(instance_id), "params": params,
            "lhs": labelled(lhs, provenance),
            "rhs": labelled(rhs, rhs_provenance or provenance),
            "ratio": labelled(ratio, rhs_provenance or provenance), "pass": bool(passed)}


def _rng(seed, stream):
    # independent stream per suite so suites can run in any order
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def random_variable(rng, max_atoms=16, scale=10.0):
    """Random law with 1..max_atoms atoms; probabilities are multiples of 1/64."""
    n = int(rng.integers(1, max_atoms + 1))
    values = np.round(rng.standard_normal(n) * scale * rng.exponential(), 6)
    w = rng.integers(1, 9, size=n).astype(float)
    probs = w / w.sum()
    probs[-1] = 1.0 - math.fsum(probs[:-1].tolist())
    return DiscreteRandomVariable(values, probs)


def _dominated_pair(rng):
    g = random_variable(rng)
    u = rng.uniform(0.0, 1.0, size=len(g))
    u[rng.uniform(size=len(g)) < 0.2] = 1.0
    return DiscreteRandomVariable(g.values * u, g.probs), g


def _var_payload(x):
    return {"values": x.values.tolist(), "probs": x.probs.tolist()}


def _pw(p):
    return p if math.isfinite(p) else "inf"


def _grid(grid, default):
    return default if grid is None else np.asarray(grid, dtype=np.float64)


def suite_lemma31(seed=0, count=200, threads=1, **_):
    from .orlicz import power, verify_lemma31
    exps = (0.5, 1.0, 2.0, 3.0)
    pairs = [(a, b) for a in exps for b in exps]
    rng = _rng(seed, 31)
    xs = [random_variable(rng) for _ in range(count)]

    def one(i):
        a, b = pairs[i % len(pairs)]
        rep = verify_lemma31(xs[i], power(a), power(b))
        return rep, a, b

    recs, fails = [], []
    for i, (rep, a, b) in enumerate(_map(one, range(count), threads)):
        params = {"phi": f"power({a:g})", "psi": f"power({b:g})", "lower": labelled(rep.lower, BISECTION)}
        recs.append(record("lemma31", i, params, rep.value, rep.upper,
                           rep.value / rep.upper if rep.upper > 0 else None, rep.passed,
                           GRID_UPPER, BISECTION))
        if not rep.passed:
            fails.append({"instance_id": i, "phi": a, "psi": b, "f": _var_payload(xs[i])})
    return SuiteResult("lemma31", {"seed": seed, "count": count}, recs, not fails,
                       {"violations": len(fails)}, fails)


def suite_lemma32(seed=0, count=100, grid=None, pq=((1.0, 2.0), (0.5, 2.0), (2.0, 4.0)),
                  threads=1, **_):
    from .lorentz import verify_lemma32
    rng = _rng(seed, 32)
    xs = [random_variable(rng) for _ in range(count)]
    ts = _grid(grid, DEFAULT_T_GRID)
    jobs = [(i, p, q) for p, q in pq for i in range(count)]

    def one(job):
        i, p, q = job
        return verify_lemma32(xs[i], p, q, ts)

    recs, fails, bad = [], [], 0
    for n, ((i, p, q), rep) in enumerate(zip(jobs, _map(one, jobs, threads))):
        worst = max(rep.rows, key=lambda r: r.k / r.upper if r.upper > 0 else 0.0)
        recs.append(record("lemma32", n, {"instance": i, "p": p, "q": q, "t": worst.t,
                                          "lower": labelled(worst.lower, BISECTION)},
                           worst.k, worst.upper,
                           worst.k / worst.upper if worst.upper > 0 else None,
                           rep.passed, GRID_UPPER, BISECTION))
        bad += rep.violations
        if not rep.passed:
            fails.append({"instance_id": n, "p": p, "q": q, "f": _var_payload(xs[i]),
                          "t": [r.t for r in rep.rows if not r.passed]})
    return SuiteResult("lemma32", {"seed": seed, "count": count, "grid_points": int(ts.size),
                                   "pq": [list(x) for x in pq]},
                       recs, bad == 0, {"violations": bad}, fails)


def suite_lemma33(seed=0, count=100, grid=None, pq=((2.0, 2.0), (2.0, 1.0), (1.0, 1.0)),
                  threads=1, **_):
    from .lorentz import DENSE_T_GRID
    rng = _rng(seed, 33)
    pairs = [_dominated_pair(rng) for _ in range(count)]
    ts = _grid(grid, DENSE_T_GRID)
    jobs = [(i, p, q) for p, q in pq for i in range(count)]

    def one(job):
        i, p, q = job
        f, g = pairs[i]
        return verify_k_interpolation(f, g, p, q, ts)

    recs, fails, skipped = [], [], 0
    for n, ((i, p, q), rep) in enumerate(zip(jobs, _map(one, jobs, threads))):
        skipped += rep.status != "checked"
        params = {"instance": i, "p": p, "q": q, "status": rep.status,
                  "norm_hg": labelled(rep.norm_hg, GRID_UPPER),
                  "bound_hardy": labelled(rep.bound_hardy, EXACT),
                  "hardy_ok": rep.hardy_ok}
        recs.append(record("lemma33", n, params, rep.norm_f, rep.bound_conclusion,
                           rep.norm_f / rep.bound_conclusion if rep.bound_conclusion > 0 else None,
                           rep.passed))
        if not rep.passed:
            f, g = pairs[i]
            fails.append({"instance_id": n, "p": p, "q": q, "f": _var_payload(f), "g": _var_payload(g)})
    return SuiteResult("lemma33", {"seed": seed, "count": count, "grid_points": int(ts.size),
                                   "pq": [list(x) for x in pq]},
                       recs, not fails, {"violations": len(fails), "hypothesis_failed": skipped},
                       fails)


def suite_dilation(seed=0, count=100, rtol=1e-10, **_):
    from .lorentz import dilate
    rng = _rng(seed, 34)
    recs, fails = [], []
    pq_choices = [(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (0.5, 2.0), (3.0, math.inf), (1.0, 4.0)]
    for i in range(count):
        p, q = pq_choices[i % len(pq_choices)]
        x = random_variable(rng)
        if i % 2:
            a = float(rng.uniform(1.0, 8.0))
            f = x
        else:
            # shrink the support to [0, a] so the identity is exact
            a = float(rng.uniform(0.05, 1.0))
            fs = as_step(x)
            f = dilate(fs, 1.0 / a)
        lhs = lorentz_norm(dilate(f, a), p, q)
        rhs = a ** (-1.0 / p) * lorentz_norm(f, p, q)
        err = abs(lhs - rhs) / rhs if rhs > 0 else abs(lhs)
        ok = err <= rtol
        recs.append(record("dilation", i, {"a": a, "p": p, "q": _pw(q), "rel_err": err},
                           lhs, rhs, lhs / rhs if rhs > 0 else None, ok))
        if not ok:
            fails.append({"instance_id": i, "a": a, "p": p, "q": _pw(q),
                          "f": _var_payload(as_step(f).as_variable())})
    return SuiteResult("dilation", {"seed": seed, "count": count, "rtol": rtol}, recs,
                       not fails, {"violations": len(fails)}, fails)


def suite_decoupling(seed=0, count=200, depth_max=6, **_):
    from .tangent import check_ci, check_tangent
    kinds = KINDS
    recs, fails = [], []
    per = [count // 3 + (j < count % 3) for j in range(3)]
    seqs = []
    for j, kind in enumerate(kinds):
        seqs += CorpusSpec(max(per[j], 1), 1, depth_max, kind, (-3, 3), seed + j).generate()[:per[j]]
    for i, seq in enumerate(seqs):
        pair = decouple(seq, check=False)
        tan = check_tangent(seq, pair.marginal)
        ci = check_ci(pair)
        ok = tan and ci.passed
        recs.append(record("decoupling", i, {"depth": seq.depth, "tangent": tan,
                                             "ci_marginal": ci.marginal_ok,
                                             "ci_factorization": ci.factorization_ok,
                                             "pairs": ci.checked_paths},
                           None, None, None, ok))
        if not ok:
            fails.append({"instance_id": i, "sequence": sequence_to_dict(seq)})
    return SuiteResult("decoupling", {"seed": seed, "count": len(seqs), "depth_max": depth_max},
                       recs, not fails, {"violations": len(fails)}, fails)


def verification_corpus(seed=0, per_kind=40, depth_max=8):
    """Tail/Levy corpus: every generator kind up to ``depth_max`` plus the
    k=2, N1=4 counterexample sequence."""
    seqs = []
    for j, kind in enumerate(KINDS):
        seqs += CorpusSpec(per_kind, 1, depth_max, kind, (-3, 3), seed + 100 + j).generate()
    if depth_max >= 6:
        seqs.append(prop23_sequence(2, 4))
    return seqs


def suite_tail(seed=0, per_kind=40, depth_max=8, grid=None, threads=1, **_):
    from .tangent import verify_tail_comparison
    seqs = verification_corpus(seed, per_kind, depth_max)
    reps = _map(lambda s: verify_tail_comparison(s, grid), seqs, threads)
    recs, fails = [], []
    part = 0
    for i, (seq, rep) in enumerate(zip(seqs, reps)):
        r = np.asarray(rep.lhs) / np.maximum(2 * np.asarray(rep.rhs), 1e-300)
        j = int(np.argmax(r)) if r.size else 0
        lhs = rep.lhs[j] if r.size else 0.0
        rhs = 2 * rep.rhs[j] if r.size else 0.0
        part += rep.partial_sum_violations
        recs.append(record("tail", i, {"depth": seq.depth, "t": rep.t[j] if r.size else None,
                                       "checks": len(rep.t),
                                       "partial_sum_violations": rep.partial_sum_violations},
                           lhs, rhs, lhs / rhs if rhs > 0 else None, rep.passed))
        if not rep.passed:
            fails.append({"instance_id": i, "sequence": sequence_to_dict(seq)})
    return SuiteResult("tail", {"seed": seed, "count": len(seqs), "depth_max": depth_max},
                       recs, not fails,
                       {"violations": len(fails), "partial_sum_violations": part}, fails)


def suite_levy(seed=0, per_kind=20, depth_max=8, grid=None, threads=1, **_):
    from .tangent import verify_levy
    seqs = verification_corpus(seed, per_kind, depth_max)
    reps = _map(lambda s: verify_levy(decouple(s, check=False), grid), seqs, threads)
    recs, fails = [], []
    mixed = checked = 0
    for i, (seq, rep) in enumerate(zip(seqs, reps)):
        checked += rep.status == "checked"
        mixed += rep.mixed_violations
        recs.append(record("levy", i, {"depth": seq.depth, "status": rep.status,
                                       "checks": rep.checks,
                                       "one_sided_violations": rep.one_sided_violations,
                                       "mixed_violations": rep.mixed_violations},
                           rep.violations, 0, None, rep.passed))
        if not rep.passed:
            fails.append({"instance_id": i, "sequence": sequence_to_dict(seq)})
    return SuiteResult("levy", {"seed": seed, "count": len(seqs), "depth_max": depth_max},
                       recs, not fails,
                       {"checked": checked, "not_applicable": len(seqs) - checked,
                        "mixed_violations": mixed}, fails)


def kolmogorov_corpus(seed=0, count=30):
    rad = DiscreteRandomVariable([-1.0, 1.0], [0.5, 0.5])
    lists = [[rad] * 8, [rad.scale(w) for w in (1.0, 2.0, 4.0)], [rad]]
    rng = _rng(seed, 35)
    for _ in range(count):
        n = int(rng.integers(1, 9))
        xs = []
        for _ in range(n):
            m = int(rng.integers(1, 3))
            v = rng.integers(1, 6, size=m).astype(float)
            w = rng.integers(1, 5, size=m).astype(float)
            w = w / (2 * w.sum())
            xs.append(DiscreteRandomVariable(np.concatenate([v, -v]), np.concatenate([w, w])).merged())
        lists.append(xs)
    return lists


def suite_kolmogorov(seed=0, count=30, qs=(1.0, 2.0, 4.0), grid=None, **_):
    from .tangent import verify_kolmogorov_converse
    lists = kolmogorov_corpus(seed, count)
    recs, fails = [], []
    for i, xs in enumerate(lists):
        for q in qs:
            rep = verify_kolmogorov_converse(xs, q, grid)
            recs.append(record("kolmogorov", len(recs), {"instance": i, "n": len(xs), "q": q,
                                                         "checks": rep.checks,
                                                         "worst_margin": labelled(rep.worst_margin, EXACT)},
                               rep.e_smax_q, rep.e_ximax_q, None, rep.passed))
            if not rep.passed:
                fails.append({"instance_id": len(recs) - 1, "q": q,
                              "xis": [_var_payload(x) for x in xs]})
    return SuiteResult("kolmogorov", {"seed": seed, "count": len(lists), "q": list(qs)},
                       recs, not fails, {"violations": len(fails)}, fails)


def harness_corpora(seed=0, count=500, depth_max=6):
    per = [count // 3 + (j < count % 3) for j in range(3)]
    return [CorpusSpec(per[j], 1, depth_max, kind, (-3, 3), seed + 200 + j)
            for j, kind in enumerate(KINDS)]


def _ratio_records(rep):
    return [record(rep.experiment, i, dict(inst.params, **{k: v for k, v in rep.params.items()
                                                           if k != "corpus"}),
                   inst.lhs, inst.rhs, inst.ratio, inst.passed)
            for i, inst in enumerate(rep.instances)]


def suite_harness(seed=0, count=500, depth_max=6, threads=1, **_):
    """Decoupling ratios for the three moment-type harnesses plus the
    ``power(p)`` cross-check ``Phi ratio = (p-norm ratio)**p``."""
    from .orlicz import power
    corpora = harness_corpora(seed, count, depth_max)
    reports = []
    for c in corpora:
        reports.append(run_theorem11(c, power(2.0), 2.0, threads))
        reports.append(run_theorem11(c, power(1.0), 1.0, threads))
        reports.append(run_theorem11(c, phi_t(1.0, 2.0, 1.0), 2.0, threads))
        reports.append(run_moment_inequality(c, (1.0, 2.0), threads))
        reports.append(run_corollary15(c, COROLLARY15_PQ, threads))
    recs, fails = [], []
    for rep in reports:
        recs += _ratio_records(rep)
        fails += [dict(i.to_dict(), experiment=rep.experiment) for i in rep.failures()]
    worst_cross = 0.0
    for j in range(len(corpora)):
        th2, th1, _, mom = reports[5 * j: 5 * j + 4]
        for thr, p in ((th1, 1.0), (th2, 2.0)):
            norm_rows = [r for r in mom.instances if r.params["p"] == p]
            for a, b in zip(thr.instances, norm_rows):
                if a.ratio is None or b.ratio is None:
                    continue
                err = abs(a.ratio - b.ratio ** p) / max(abs(a.ratio), 1e-300)
                worst_cross = max(worst_cross, err)
    cross_ok = worst_cross <= 1e-9
    consts = [r.to_dict() for r in estimate_constants(reports)]
    finite = all(rep.passed for rep in reports)
    return SuiteResult("harness", {"seed": seed, "count": count, "depth_max": depth_max},
                       recs, finite and cross_ok,
                       {"all_finite": finite, "cross_check_rel_err": labelled(worst_cross, EXACT),
                        "cross_check_ok": cross_ok, "constants": consts,
                        "c_emp": {f"{r.params['corpus']['kind']}:{r.params['phi']}": r.extra["c_emp"]
                                  for r in reports if r.experiment == "theorem11"}},
                       fails)


def suite_theorem13(seed=0, count=30, grid=None, pq=((1.0, 4.0), (0.5, 2.0), (1.0, 2.0)), **_):
    rng = _rng(seed, 13)
    pairs = [_dominated_pair(rng) for _ in range(count)]
    recs, fails = [], []
    for p, q in pq:
        for i, (f, g) in enumerate(pairs):
            rep = run_theorem13_chain(f, g, p, q, grid)
            recs.append(record("theorem13", len(recs), {"instance": i, "p": p, "q": q,
                                                        "status": rep.status},
                               rep.worst_k_ratio, rep.factor, rep.worst_k_ratio / rep.factor,
                               rep.passed, GRID_UPPER, EXACT))
            if not rep.passed:
                fails.append({"instance_id": len(recs) - 1, "p": p, "q": q,
                              "f": _var_payload(f), "g": _var_payload(g)})
    return SuiteResult("theorem13", {"seed": seed, "count": count, "pq": [list(x) for x in pq]},
                       recs, not fails, {"violations": len(fails)}, fails)


PROP23_CASES = ((2, 4), (2, 8), (3, 8))


def suite_counterexample(cases=PROP23_CASES, **_):
    recs, fails = [], []
    for i, (k, n1) in enumerate(cases):
        rep = counterexample_prop23(k, n1)
        d = rep.to_dict()
        recs.append(record("counterexample", i, {"k": k, "n1": n1, "bound": d["bound"],
                                                 "engines_agree": rep.agreement},
                           rep.lhs, rep.rhs, rep.ratio, rep.passed))
        if not rep.passed:
            fails.append({"instance_id": i, "k": k, "n1": n1})
    return SuiteResult("counterexample", {"cases": [list(c) for c in cases]}, recs, not fails,
                       {"violations": len(fails)}, fails)


SUITES = {
    "lemma31": suite_lemma31,
    "lemma32": suite_lemma32,
    "lemma33": suite_lemma33,
    "dilation": suite_dilation,
    "decoupling": suite_decoupling,
    "tail": suite_tail,
    "levy": suite_levy,
    "kolmogorov": suite_kolmogorov,
    "harness": suite_harness,
    "theorem13": suite_theorem13,
    "counterexample": suite_counterexample,
}
