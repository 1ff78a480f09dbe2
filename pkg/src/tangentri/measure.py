"""Finite probability spaces: discrete random variables and step functions.

A :class:`DiscreteRandomVariable` is a finite list of weighted atoms. Its
decreasing rearrangement is a :class:`StepFunction` on ``[0, 1)``, which is
the representation every rearrangement-invariant norm in this package works
on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_ATOMS = 1 << 22
PROB_RTOL = 1e-12


class SizingError(ValueError):
    """A problem exceeds the exact-engine size caps."""


def _frozen(a, dtype=np.float64):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def canonicalize(values):
    """Round to 12 significant digits so float noise does not split atoms."""
    v = np.asarray(values, dtype=np.float64)
    out = np.array(v)
    out += 0.0  # maps -0.0 to 0.0
    mask = np.isfinite(v) & (v != 0)
    if mask.any():
        x = v[mask]
        scale = 10.0 ** (11 - np.floor(np.log10(np.abs(x))))
        out[mask] = np.round(x * scale) / scale
    return out if out.ndim else out[()]


def merge_atoms(values, probs, canonical=True):
    """Coalesce equal values, returning sorted ``(values, probs)`` arrays."""
    values = np.asarray(values, dtype=np.float64).ravel()
    probs = np.asarray(probs, dtype=np.float64).ravel()
    if canonical:
        values = canonicalize(values)
    uniq, inv = np.unique(values, return_inverse=True)
    return uniq, np.bincount(inv.ravel(), weights=probs, minlength=len(uniq))


@dataclass(frozen=True, eq=False)
class DiscreteRandomVariable:
    """Random variable with finitely many atoms ``(value, prob)``."""

    values: np.ndarray
    probs: np.ndarray

    def __init__(self, values, probs):
        values = np.asarray(values, dtype=np.float64).ravel()
        probs = np.asarray(probs, dtype=np.float64).ravel()
        if values.shape != probs.shape:
            raise ValueError("values and probs must have the same length")
        if values.size == 0:
            raise ValueError("a random variable needs at least one atom")
        if values.size > MAX_ATOMS:
            raise SizingError(f"{values.size} atoms exceeds the cap of 2**22")
        if not np.all(np.isfinite(values)):
            raise ValueError("atom values must be finite")
        if not np.all(probs > 0):
            raise ValueError("every atom probability must be > 0")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > PROB_RTOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "probs", _frozen(probs))

    @classmethod
    def from_atoms(cls, atoms):
        """Build from an iterable of ``(value, prob)`` pairs."""
        atoms = list(atoms)
        if not atoms:
            raise ValueError("a random variable needs at least one atom")
        v, p = zip(*atoms)
        return cls(v, p)

    @classmethod
    def constant(cls, c):
        return cls([c], [1.0])

    @classmethod
    def from_outcomes(cls, outcomes, weight=None, canonical=True):
        """Law of equally weighted (or ``weight``-weighted) outcomes, merged."""
        outcomes = np.asarray(outcomes, dtype=np.float64).ravel()
        if weight is None:
            weight = np.full(outcomes.shape, 1.0 / outcomes.size)
        v, p = merge_atoms(outcomes, weight, canonical=canonical)
        return cls(v, p)

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"DiscreteRandomVariable({self.atoms!r})"

    def merged(self, canonical=True):
        v, p = merge_atoms(self.values, self.probs, canonical=canonical)
        return DiscreteRandomVariable(v, p)

    def scale(self, c):
        return DiscreteRandomVariable(c * self.values, self.probs)

    def abs(self):
        return DiscreteRandomVariable(np.abs(self.values), self.probs)

    def map(self, fn):
        return DiscreteRandomVariable(fn(self.values), self.probs).merged()

    def mean(self):
        return float(np.dot(self.values, self.probs))

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def is_zero(self):
        return bool(np.all(self.values == 0))

    def same_law(self, other):
        a, b = self.merged(), other.merged()
        return (len(a) == len(b) and np.array_equal(a.values, b.values)
                and np.array_equal(a.probs, b.probs))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous step function on ``[0, 1)``.

    ``values[i]`` holds on ``[breakpoints[i], breakpoints[i + 1])``. The
    function is extended by 0 outside ``[0, 1)``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    decreasing: bool = False

    def __init__(self, breakpoints, values, decreasing=False):
        bp = np.asarray(breakpoints, dtype=np.float64).ravel()
        vals = np.asarray(values, dtype=np.float64).ravel()
        if bp.size != vals.size + 1 or vals.size == 0:
            raise ValueError("need len(breakpoints) == len(values) + 1 >= 2")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must run from 0 to 1")
        if not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("step values must be finite")
        if decreasing and (np.any(vals < 0) or np.any(np.diff(vals) > 0)):
            raise ValueError("a decreasing step function must be nonincreasing and >= 0")
        object.__setattr__(self, "breakpoints", _frozen(bp))
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "decreasing", bool(decreasing))

    @classmethod
    def constant(cls, c):
        return cls([0.0, 1.0], [c], decreasing=c >= 0)

    @classmethod
    def indicator(cls, a, height=1.0):
        """``height`` on ``[0, a)`` and 0 on ``[a, 1)``."""
        if not 0 < a <= 1:
            raise ValueError("indicator measure must lie in (0, 1]")
        if a == 1.0:
            return cls.constant(height)
        return cls([0.0, a, 1.0], [height, 0.0], decreasing=height >= 0)

    @classmethod
    def from_pieces(cls, breakpoints, values, decreasing=None):
        """Like the constructor but merges equal neighbours and empty pieces."""
        bp = np.asarray(breakpoints, dtype=np.float64)
        vals = np.asarray(values, dtype=np.float64)
        keep = np.diff(bp) > 0
        lefts, rights, vals = bp[:-1][keep], bp[1:][keep], vals[keep]
        change = np.ones(vals.size, dtype=bool)
        change[1:] = vals[1:] != vals[:-1]
        new_bp = np.append(lefts[change], rights[-1])
        new_vals = vals[change]
        if decreasing is None:
            decreasing = bool(np.all(new_vals >= 0) and np.all(np.diff(new_vals) <= 0))
        return cls(new_bp, new_vals, decreasing=decreasing)

    @property
    def lengths(self):
        return np.diff(self.breakpoints)

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return (f"StepFunction(breakpoints={self.breakpoints.tolist()!r}, "
                f"values={self.values.tolist()!r}, decreasing={self.decreasing})")

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        idx = np.searchsorted(self.breakpoints, s, side="right") - 1
        inside = (s >= 0) & (s < 1)
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.size - 1)], 0.0)
        return out if out.ndim else float(out)

    def scale(self, c):
        return StepFunction(self.breakpoints, c * self.values,
                            decreasing=self.decreasing and c >= 0)

    def as_variable(self):
        """The same law seen as a random variable on ``([0, 1), ds)``."""
        return DiscreteRandomVariable(self.values, self.lengths)

    def integral(self, power=1.0, lo=0.0, hi=1.0):
        """Exact ``int_lo^hi |f(s)|**power ds``."""
        left = np.clip(self.breakpoints[:-1], lo, hi)
        right = np.clip(self.breakpoints[1:], lo, hi)
        overlap = right - left
        vals = np.abs(self.values)
        terms = np.where(overlap > 0, np.power(vals, power) * overlap, 0.0)
        return float(np.sum(terms))

    def equals(self, other):
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    def dominated_by(self, other):
        """True iff ``self <= other`` pointwise on ``[0, 1)``."""
        bp = np.union1d(self.breakpoints, other.breakpoints)[:-1]
        return bool(np.all(self(bp) <= other(bp)))


def as_step(f):
    """Decreasing rearrangement of ``f`` unless it already is one."""
    if isinstance(f, StepFunction):
        if not f.decreasing:
            raise ValueError("expected a decreasing step function")
        return f
    return decreasing_rearrangement(f)


def decreasing_rearrangement(f):
    """Nonincreasing step function equimeasurable with ``|f|``.

    Equal ``|value|`` atoms are coalesced, so the result is canonical.
    """
    if isinstance(f, StepFunction):
        f = f.as_variable()
    mags, probs = merge_atoms(np.abs(f.values), f.probs, canonical=False)
    order = np.argsort(-mags, kind="stable")
    mags, probs = mags[order], probs[order]
    bp = np.concatenate([[0.0], np.cumsum(probs)])
    bp = np.minimum(bp, 1.0)
    bp[-1] = 1.0
    return StepFunction.from_pieces(bp, mags, decreasing=True)


def expect_phi(f, phi, scale=1.0):
    """``E phi(|f| / scale)`` as an exact finite sum."""
    if scale <= 0:
        raise ValueError("scale must be > 0")
    if isinstance(f, StepFunction):
        f = f.as_variable()
    return phi.expect(f.values, f.probs, scale)


def p_norm(f, p):
    """``(E|f|**p)**(1/p)``; ``max |f|`` when ``p`` is infinite."""
    if isinstance(f, StepFunction):
        f = f.as_variable()
    if p == math.inf:
        return f.max_abs()
    if not p > 0:
        raise ValueError("p must be > 0")
    return float(np.dot(f.probs, np.power(np.abs(f.values), p))) ** (1.0 / p)


def tail_prob(f, t):
    """``P(|f| >= t)``."""
    if isinstance(f, StepFunction):
        f = f.as_variable()
    return math.fsum(f.probs[np.abs(f.values) >= t].tolist())
