"""Grid kernel selection: compiled extension if available, else pure Python.

Set EDGEBOT_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two backends).
"""

from __future__ import annotations

import os

if os.environ.get("EDGEBOT_PURE_PYTHON"):
    from . import _grid_py as _impl
else:
    try:
        from . import _grid_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _grid_py as _impl

BACKEND: str = _impl.BACKEND
STRAIGHT_COST: int = _impl.STRAIGHT_COST
DIAG_COST: int = _impl.DIAG_COST

astar = _impl.astar
los_clear = _impl.los_clear
inflate = _impl.inflate
