"""Deterministic face-image corruption synthesis and robustness metrics."""

from ._backend import backend_name, compiled_available, use_backend
from .corruptions import apply_corruption, corrupt, list_kinds
from .params import (
    CATEGORIES,
    KIND_NAMES,
    CorruptionKind,
    severity_params,
)
from .rng import Prng

__version__ = "0.1.0"

__all__ = [
    "CATEGORIES",
    "CorruptionKind",
    "KIND_NAMES",
    "Prng",
    "apply_corruption",
    "backend_name",
    "compiled_available",
    "corrupt",
    "list_kinds",
    "severity_params",
    "use_backend",
    "__version__",
]
