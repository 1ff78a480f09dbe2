"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy fallback in ``_pykernels`` is used. Setting ``TANGENTRI_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

backend = _pykernels
BACKEND = "python"

if os.environ.get("TANGENTRI_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        backend = _ckernels
        BACKEND = "cython"

phi_terms = backend.phi_terms
expect_terms = backend.expect_terms
orlicz_bisect = backend.orlicz_bisect
path_stats = backend.path_stats
pair_stats = backend.pair_stats

__all__ = ["BACKEND", "phi_terms", "expect_terms", "orlicz_bisect",
           "path_stats", "pair_stats"]
