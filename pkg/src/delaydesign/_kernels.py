"""Numerical-kernel backend selection.

The compiled extension (`delaydesign._core`, Cython) is preferred when it
imported cleanly; otherwise the numpy fallback (`delaydesign._purepy`) is
used.  Set DELAYDESIGN_BACKEND=python or =compiled to force a choice — the
forced compiled backend raises if the extension is unavailable.
"""

from __future__ import annotations

import os

_requested = os.environ.get("DELAYDESIGN_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _purepy as _impl

        BACKEND = "python"
elif _requested in ("compiled", "c"):
    from . import _core as _impl

    BACKEND = "compiled"
elif _requested in ("python", "pure", "purepy"):
    from . import _purepy as _impl

    BACKEND = "python"
else:
    raise ImportError(
        f"DELAYDESIGN_BACKEND={_requested!r} not recognized "
        "(expected 'auto', 'compiled' or 'python')"
    )

logderiv_batch = _impl.logderiv_batch
admissibility_grid = _impl.admissibility_grid
euler_run = _impl.euler_run


def backend_name() -> str:
    return BACKEND
