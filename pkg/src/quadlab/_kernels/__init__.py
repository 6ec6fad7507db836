"""Kernel backend selection.

The compiled extension is preferred when importable; `QUADLAB_BACKEND=python`
forces the numpy fallback (used by the benchmark and the cross-backend
tests).  Both backends expose the same functions with identical semantics.
"""

import os

from . import _py

if os.environ.get("QUADLAB_BACKEND", "").lower() == "python":
    _impl = _py
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _py

BACKEND = _impl.BACKEND

count_quadratic = _impl.count_quadratic
min_abs_quadratic = _impl.min_abs_quadratic
min_abs_power_family = _impl.min_abs_power_family
four_term_pair_count = _impl.four_term_pair_count
points_in_disk = _impl.points_in_disk


def backends():
    """All importable backends, for benchmarks and equivalence tests."""
    found = {"python": _py}
    try:
        from . import _native
        found["native"] = _native
    except ImportError:
        pass
    return found
