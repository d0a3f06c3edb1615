"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise (or when
``COVGRAPH_PURE_PYTHON`` is set to a non-empty value other than ``0``) the
numpy fallback is used. ``BACKEND`` names the active choice.
"""

import os

from . import _fallback

_force_py = os.environ.get("COVGRAPH_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_py:
        raise ImportError("pure-Python backend forced by environment")
    from . import _core as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"


def available():
    """Map backend name to module for every backend that imports."""
    out = {"python": _fallback}
    try:
        from . import _core

        out["cython"] = _core
    except ImportError:
        pass
    return out


power_embed = _impl.power_embed
# D^T D through BLAS beats the compiled triple loop at every size measured
# by benchmarks/bench_backends.py, so both backends share it.
covariance = _fallback.covariance
node_triangles = _impl.node_triangles
induced_codes = _impl.induced_codes
