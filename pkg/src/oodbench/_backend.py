"""Kernel backend selection.

The hot pixel loops live in a compiled extension (``_kernels``) with a
pure Python twin (``_kernels_py``) that produces bit-identical output.
The compiled core is picked when importable; ``OODBENCH_BACKEND`` forces
a choice (``compiled`` / ``python`` / ``auto``).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

kernels = _kernels_py


def use_backend(name: str) -> str:
    """Select the active kernel set; returns the name actually in use."""
    global kernels
    if name == "python":
        kernels = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel extension is not available")
        kernels = _compiled
    elif name == "auto":
        kernels = _compiled if _compiled is not None else _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    return kernels.BACKEND_NAME


def backend_name() -> str:
    return kernels.BACKEND_NAME


def compiled_available() -> bool:
    return _compiled is not None


use_backend(os.environ.get("OODBENCH_BACKEND", "auto"))
