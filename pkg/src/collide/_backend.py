"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the numpy
fallback is used.  Set COLLIDE_BACKEND=python (or =compiled) to force a
choice; forcing `compiled` raises if the extension was not built.
"""

import os

_requested = os.environ.get("COLLIDE_BACKEND", "").strip().lower()

if _requested in ("", "compiled"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "COLLIDE_BACKEND=compiled but the collide._kernels extension "
                "is not built; reinstall with Cython available"
            )
        from . import _kernels_py as _impl

        BACKEND = "python"
elif _requested == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    raise ValueError(f"unknown COLLIDE_BACKEND value: {_requested!r}")

build_alias = _impl.build_alias
alias_pick = _impl.alias_pick
alias_pick_count = _impl.alias_pick_count
apply_gate = _impl.apply_gate
