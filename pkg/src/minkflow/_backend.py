"""Stepping-kernel selection.

The compiled extension is preferred when importable; the pure-numpy fallback
is always available.  Set MINKFLOW_BACKEND=python or =compiled to force one.
"""

import os

_forced = os.environ.get("MINKFLOW_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernel_py as kernel
elif _forced == "compiled":
    from . import _kernel as kernel
elif _forced:
    raise ValueError(f"MINKFLOW_BACKEND must be 'python' or 'compiled', got {_forced!r}")
else:
    try:
        from . import _kernel as kernel
    except ImportError:
        from . import _kernel_py as kernel

BACKEND = kernel.NAME
