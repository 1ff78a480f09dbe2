"""Orlicz functions, growth classes and Orlicz norms.

Also holds the minimum-of-two-functions comparison: the infimum of
``||f'||_Phi + ||f''||_Psi`` over splits ``f' + f'' = f#`` is sandwiched
between ``1/2 ||f||_{Theta_1}`` and ``2 ||f||_Theta`` where
``Theta = min(Phi, Psi)`` and ``Theta_1 = Theta / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from ._pykernels import HINGE, POWER
from .measure import DiscreteRandomVariable, StepFunction, as_step

BISECT_RTOL = 1e-10
BISECT_MAXITER = 200
SANDWICH_SLACK = 1e-9
GROWTH_TOL = 1e-12

DEFAULT_X_GRID = np.logspace(-6, 6, 241)
DEFAULT_C_GRID = np.array([2.0, 2.0 ** 1.5, 4.0, 8.0, 64.0])
_MONOTONE_GRID = np.concatenate([[0.0], np.logspace(-12, 12, 481)])


class InvalidOrliczFunction(ValueError):
    """Phi(0) != 0, Phi negative, or Phi decreasing somewhere on the test grid."""


class GrowthClassError(ValueError):
    """An Orlicz function could not be certified in the requested class."""


@dataclass(frozen=True, eq=False)
class OrliczFunction:
    """An evaluable ``Phi: [0, inf) -> [0, inf)`` with growth-class metadata.

    Build instances with :func:`power`, :func:`phi_t`, :func:`hinge`,
    :func:`min_pair`, :func:`scaled` or :func:`custom`.
    """

    kind: str
    params: tuple
    children: tuple = ()
    fn: Optional[Callable] = None
    declared_Fq: Optional[float] = None
    declared_Gp: Optional[float] = None
    convex: bool = False
    name: str = field(default="", compare=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        k = self.kind
        if k == "power":
            return np.power(x, self.params[0])
        if k == "phi_t":
            p, q, t = self.params
            return np.minimum(np.power(x, p), np.power(t * x, q))
        if k == "hinge":
            return np.maximum(x - self.params[0], 0.0)
        if k == "min_pair":
            return np.minimum(self.children[0](x), self.children[1](x))
        if k == "scaled":
            return self.params[0] * self.children[0](x)
        return np.asarray(self.fn(x), dtype=np.float64)

    def __repr__(self):
        return self.name or f"OrliczFunction({self.kind}, {self.params})"

    def terms(self):
        """Canonical ``[(coef, base_kind, param)]`` with ``Phi = min coef*base``.

        ``None`` for black-box functions.
        """
        k = self.kind
        if k == "power":
            return [(1.0, POWER, self.params[0])]
        if k == "phi_t":
            p, q, t = self.params
            return [(1.0, POWER, p), (t ** q, POWER, q)]
        if k == "hinge":
            return [(1.0, HINGE, self.params[0])]
        if k == "min_pair":
            a, b = self.children[0].terms(), self.children[1].terms()
            return None if a is None or b is None else a + b
        if k == "scaled":
            inner = self.children[0].terms()
            if inner is None:
                return None
            c = self.params[0]
            return [(c * coef, kind, a) for coef, kind, a in inner]
        return None

    def _term_arrays(self):
        cached = self.__dict__.get("_arrays")
        if cached is None:
            t = self.terms()
            if t is None:
                cached = False
            else:
                cached = (np.array([x[0] for x in t], dtype=np.float64),
                          np.array([x[1] for x in t], dtype=np.int_),
                          np.array([x[2] for x in t], dtype=np.float64))
            object.__setattr__(self, "_arrays", cached)
        return cached

    def expect(self, values, probs, scale=1.0):
        """``sum probs * Phi(|values| / scale)``."""
        arrays = self._term_arrays()
        if arrays:
            return kernels.expect_terms(values, probs, *arrays, float(scale))
        with np.errstate(over="ignore"):
            x = np.abs(values) / scale
        return float(np.dot(probs, self(x)))

    def validate(self):
        """Raise :class:`InvalidOrliczFunction` unless Phi looks like an Orlicz function."""
        if self.__dict__.get("_valid"):
            return
        y = self(_MONOTONE_GRID)
        if y[0] != 0:
            raise InvalidOrliczFunction(f"{self!r}: Phi(0) = {y[0]!r}, expected 0")
        if np.any(np.isnan(y)) or np.any(y < 0):
            raise InvalidOrliczFunction(f"{self!r}: Phi takes negative or NaN values")
        bad = np.nonzero(np.diff(y) < 0)[0]
        if bad.size:
            x = _MONOTONE_GRID[bad[0]]
            raise InvalidOrliczFunction(f"{self!r}: Phi decreases after x = {x:.3g}")
        object.__setattr__(self, "_valid", True)


def power(p):
    """``Phi(x) = x**p``; lies in ``F_p`` and ``G_p``, convex iff ``p >= 1``."""
    if not p > 0:
        raise ValueError("power exponent must be > 0")
    p = float(p)
    return OrliczFunction("power", (p,), declared_Fq=p, declared_Gp=p,
                          convex=p >= 1, name=f"power({p:g})")


def phi_t(p, q, t):
    """``Phi_t(x) = x**p  min  (t x)**q`` for ``0 < p < q``; in ``F_q`` and ``G_p``."""
    if not 0 < p < q < math.inf:
        raise ValueError("phi_t needs 0 < p < q < inf")
    if not t > 0:
        raise ValueError("phi_t needs t > 0")
    return OrliczFunction("phi_t", (float(p), float(q), float(t)),
                          declared_Fq=float(q), declared_Gp=float(p),
                          name=f"phi_t({p:g},{q:g},{t:g})")


def hinge(a):
    """``Phi(x) = (x - a)+``; convex, hence dilatory and in ``G_1``."""
    if a < 0:
        raise ValueError("hinge offset must be >= 0")
    a = float(a)
    if a == 0:
        return OrliczFunction("hinge", (a,), declared_Fq=1.0, declared_Gp=1.0,
                              convex=True, name="hinge(0)")
    return OrliczFunction("hinge", (a,), declared_Gp=1.0, convex=True,
                          name=f"hinge({a:g})")


def min_pair(phi, psi):
    """Pointwise minimum; growth classes combine as ``max`` of F and ``min`` of G."""
    fq = (max(phi.declared_Fq, psi.declared_Fq)
          if phi.declared_Fq is not None and psi.declared_Fq is not None else None)
    gp = (min(phi.declared_Gp, psi.declared_Gp)
          if phi.declared_Gp is not None and psi.declared_Gp is not None else None)
    return OrliczFunction("min_pair", (), (phi, psi), declared_Fq=fq, declared_Gp=gp,
                          name=f"min({phi!r}, {psi!r})")


def scaled(c, phi):
    """``x -> c * Phi(x)`` for ``c > 0``."""
    if not c > 0:
        raise ValueError("scale factor must be > 0")
    return OrliczFunction("scaled", (float(c),), (phi,), declared_Fq=phi.declared_Fq,
                          declared_Gp=phi.declared_Gp, convex=phi.convex,
                          name=f"{c:g}*{phi!r}")


def custom(fn, name="custom", declared_Fq=None, declared_Gp=None, convex=False):
    """Wrap a vectorised callable. It is checked on a grid before use."""
    return OrliczFunction("custom", (), fn=fn, declared_Fq=declared_Fq,
                          declared_Gp=declared_Gp, convex=convex, name=name)


@dataclass(frozen=True)
class OrliczNormResult:
    value: float
    degenerate: bool
    iterations: int
    provenance: str


def _as_variable(f):
    return f.as_variable() if isinstance(f, StepFunction) else f


def orlicz_norm_info(f, phi, rtol=BISECT_RTOL, maxiter=BISECT_MAXITER):
    """Orlicz norm with diagnostics.

    The bracket starts at ``max |f|`` and doubles or halves until it straddles
    the constraint ``E Phi(|f|/lam) <= 1``; bisection then runs to relative
    width ``rtol``. The returned value is the feasible (upper) end.

    When ``E Phi(|f|/lam) <= 1`` for every ``lam`` tried down to underflow the
    result is the sentinel 0 with ``degenerate=True``. When it never becomes
    feasible the value is ``inf``.
    """
    phi.validate()
    f = _as_variable(f)
    vals, probs = f.values, f.probs
    m = f.max_abs()
    prov = f"bisection({rtol:g})"
    if m == 0:
        return OrliczNormResult(0.0, False, 0, "exact")

    def g(lam):
        return phi.expect(vals, probs, lam)

    hi = m
    steps = 0
    while g(hi) > 1.0:
        hi *= 2.0
        steps += 1
        if steps > 2000 or math.isinf(hi):
            return OrliczNormResult(math.inf, True, steps, prov)
    if steps:
        lo = hi / 2.0
    else:
        lo = hi / 2.0
        while g(lo) <= 1.0:
            hi = lo
            lo /= 2.0
            steps += 1
            if steps > 2000 or lo == 0.0:
                return OrliczNormResult(0.0, True, steps, prov)

    arrays = phi._term_arrays()
    if arrays:
        hi, it = kernels.orlicz_bisect(vals, probs, *arrays, lo, hi, rtol, maxiter)
    else:
        it = 0
        while hi - lo > rtol * hi and it < maxiter:
            mid = 0.5 * (lo + hi)
            if g(mid) <= 1.0:
                hi = mid
            else:
                lo = mid
            it += 1
    return OrliczNormResult(float(hi), False, steps + it, prov)


def orlicz_norm(f, phi):
    """``inf{lam > 0 : E Phi(|f|/lam) <= 1}``; see :func:`orlicz_norm_info`."""
    return orlicz_norm_info(f, phi).value


@dataclass(frozen=True)
class GrowthReport:
    mode: str
    exponent: float
    max_ratio: float
    passed: bool
    analytic: Optional[bool]
    worst_x: float
    worst_c: float


def analytic_certificate(phi, exponent, mode):
    """True when the declared metadata alone proves membership, else None."""
    if mode == "F" and phi.declared_Fq is not None and phi.declared_Fq <= exponent:
        return True
    if mode == "G" and phi.declared_Gp is not None and phi.declared_Gp >= exponent:
        return True
    return None


def verify_growth_class(phi, exponent, mode, x_grid=None, c_grid=None):
    """Check ``Phi(cx) <= c**q Phi(x)`` (F) or ``Phi(cx) >= c**p Phi(x)`` (G) on a grid.

    The reported ratio is ``Phi(cx) / (c**q Phi(x))`` for F and
    ``c**p Phi(x) / Phi(cx)`` for G; the check passes iff its maximum is at
    most ``1 + 1e-12``. ``0/0`` counts as 0.
    """
    if mode not in ("F", "G"):
        raise ValueError("mode must be 'F' or 'G'")
    x = np.asarray(DEFAULT_X_GRID if x_grid is None else x_grid, dtype=np.float64)
    c = np.asarray(DEFAULT_C_GRID if c_grid is None else c_grid, dtype=np.float64)
    if np.any(c < 2):
        raise ValueError("growth constants c must be >= 2")
    phi.validate()
    X, C = np.meshgrid(x, c, indexing="ij")
    base = phi(X)
    stretched = phi(C * X)
    if mode == "F":
        num, den = stretched, np.power(C, exponent) * base
    else:
        num, den = np.power(C, exponent) * base, stretched
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(num == 0, 0.0, num / den)
    ratio = np.where(np.isnan(ratio), np.inf, ratio)
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    worst = float(ratio[i, j])
    return GrowthReport(mode, float(exponent), worst, worst <= 1 + GROWTH_TOL,
                        analytic_certificate(phi, exponent, mode),
                        float(x[i]), float(c[j]))


@dataclass(frozen=True)
class SplitResult:
    """Best split found: ``first`` is measured with Phi, ``second`` with Psi."""

    value: float
    kind: str
    param: float
    first: StepFunction
    second: StepFunction
    first_norm: float
    second_norm: float


def _piece(fs, mask):
    return DiscreteRandomVariable(np.where(mask, fs.values, 0.0), fs.lengths)


def _step_from_mask(fs, mask):
    return StepFunction(fs.breakpoints, np.where(mask, fs.values, 0.0))


def split_infimum(f, phi, psi, alphas=101):
    """Upper bound on ``inf{||f'||_Phi + ||f''||_Psi : f' + f'' = f#}``.

    Candidates: the level-set split that sends a level to Phi iff
    ``Phi <= Psi`` there (taken both at the raw values and after normalising
    by ``||f||_Theta``), scalar splits ``alpha f#`` over ``alphas`` grid
    points, and cuts of ``f#`` at each breakpoint in both assignments.
    """
    fs = as_step(f)
    n = len(fs)
    zero = StepFunction(fs.breakpoints, np.zeros(n))
    if np.all(fs.values == 0):
        return SplitResult(0.0, "zero", 0.0, zero, zero, 0.0, 0.0)

    best = None

    def consider(kind, param, mask):
        nonlocal best
        a = orlicz_norm(_piece(fs, mask), phi)
        b = orlicz_norm(_piece(fs, ~mask), psi)
        if best is None or a + b < best[0]:
            best = (a + b, kind, param, mask, a, b)

    theta_norm = orlicz_norm(fs, min_pair(phi, psi))
    v = fs.values
    consider("level_raw", 1.0, phi(v) <= psi(v))
    if theta_norm > 0:
        consider("level_normalised", theta_norm, phi(v / theta_norm) <= psi(v / theta_norm))
    idx = np.arange(n)
    for j in range(n + 1):
        u = float(fs.breakpoints[j])
        consider("cut_head_phi", u, idx < j)
        consider("cut_head_psi", u, idx >= j)

    na, nb = orlicz_norm(fs, phi), orlicz_norm(fs, psi)
    for alpha in np.linspace(0.0, 1.0, alphas):
        # Orlicz norms are positively homogeneous
        s = alpha * na + (1 - alpha) * nb
        if s < best[0]:
            best = (s, "scalar", float(alpha), None, alpha * na, (1 - alpha) * nb)

    value, kind, param, mask, a, b = best
    if mask is None:
        first, second = fs.scale(param), fs.scale(1 - param)
    else:
        first, second = _step_from_mask(fs, mask), _step_from_mask(fs, ~mask)
    return SplitResult(float(value), kind, float(param), first, second, float(a), float(b))


@dataclass(frozen=True)
class Lemma31Report:
    lower: float
    value: float
    upper: float
    passed: bool
    witness: str


def verify_lemma31(f, phi, psi, slack=SANDWICH_SLACK):
    """Check ``1/2 ||f||_{Theta_1} <= split infimum <= 2 ||f||_Theta``."""
    theta = min_pair(phi, psi)
    theta1 = scaled(0.5, theta)
    lower = 0.5 * orlicz_norm(f, theta1)
    upper = 2.0 * orlicz_norm(f, theta)
    res = split_infimum(f, phi, psi)
    ok = (lower <= res.value * (1 + slack) + 1e-300
          and res.value <= upper * (1 + slack) + 1e-300)
    return Lemma31Report(lower, res.value, upper, bool(ok), res.kind)
