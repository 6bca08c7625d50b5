"""Backend selection: compiled extension if importable, else pure Python.

Set DYNCLUST_PURE=1 to force the pure-Python kernel (used by the benchmark
to compare both backends on one interpreter).
"""

import os

if os.environ.get("DYNCLUST_PURE") == "1":
    from . import _fallback as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
dijkstra_update = _impl.dijkstra_update
