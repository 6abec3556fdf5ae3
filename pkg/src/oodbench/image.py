"""Pixel buffer conventions and byte/float conversion.

Images are plain NumPy arrays:

* byte image: shape (H, W, 3), dtype uint8, row major;
* float image: shape (H, W, 3) or (H, W), dtype float64, nominal [0, 1].

Transforms work in the float domain and clamp on the way back to bytes.
"""

import numpy as np

from .errors import ShapeError


def validate_image(img: np.ndarray) -> np.ndarray:
    if not isinstance(img, np.ndarray) or img.dtype != np.uint8:
        raise ShapeError("image must be a uint8 ndarray")
    if img.ndim != 3 or img.shape[2] != 3:
        raise ShapeError(f"image must have shape (H, W, 3), got {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ShapeError("image must be at least 1x1")
    return img


def new_image(width: int, height: int, fill=(0, 0, 0)) -> np.ndarray:
    if width < 1 or height < 1:
        raise ShapeError("image must be at least 1x1")
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = np.asarray(fill, dtype=np.uint8)
    return img


def to_float(img: np.ndarray) -> np.ndarray:
    validate_image(img)
    return img.astype(np.float64) / 255.0


def from_float(f: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1], scale to bytes, round half away from zero."""
    c = np.clip(f, 0.0, 1.0)
    return np.floor(c * 255.0 + 0.5).astype(np.uint8)
