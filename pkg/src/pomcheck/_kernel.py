"""Backend selection for the canonical labeling kernel.

The compiled extension is used when importable; the pure-Python twin is
the fallback.  Set ``POMCHECK_PURE=1`` to force the fallback (used by the
benchmark and the backend-agreement tests).
"""

import os

if os.environ.get("POMCHECK_PURE"):
    from . import _canon_py as _impl
else:
    try:
        from . import _canon_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _canon_py as _impl

canonical_order = _impl.canonical_order
BACKEND = _impl.BACKEND
