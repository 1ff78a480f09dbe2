"""Hypothesis strategies for finite laws and small adapted sequences."""

import numpy as np
from hypothesis import strategies as st

from tangentri.measure import DiscreteRandomVariable
from tangentri.tangent import AdaptedSequence

values = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False).map(lambda x: round(x, 6))


@st.composite
def variables(draw, max_atoms=12, nonzero=False):
    n = draw(st.integers(1, max_atoms))
    vals = draw(st.lists(values, min_size=n, max_size=n))
    if nonzero and all(v == 0 for v in vals):
        vals[0] = 1.0
    w = np.array(draw(st.lists(st.integers(1, 16), min_size=n, max_size=n)), float)
    probs = w / w.sum()
    probs[-1] = 1.0 - float(np.sum(probs[:-1]))
    return DiscreteRandomVariable(vals, probs)


@st.composite
def sequences(draw, max_depth=4, lo=-3, hi=3):
    n = draw(st.integers(1, max_depth))
    tables = [draw(st.lists(st.integers(lo, hi), min_size=1 << k, max_size=1 << k))
              for k in range(1, n + 1)]
    return AdaptedSequence([np.array(t, float) for t in tables])
