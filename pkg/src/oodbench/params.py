"""Corruption taxonomy and per-level hyperparameter tables.

Twenty corruption kinds in five categories, each with five severity
levels ordered mild to extreme.  The tables are the single source of
truth; ``severity_params`` returns a copy of the requested row.
"""

import enum

from .errors import InvalidSeverityError, ParameterError


class CorruptionKind(str, enum.Enum):
    BRIGHTNESS = "brightness"
    CONTRAST = "contrast"
    SATURATE = "saturate"
    FOG = "fog"
    SNOW = "snow"
    DEFOCUS_BLUR = "defocus_blur"
    COLOR_SHIFT = "color_shift"
    PIXELATE = "pixelate"
    MOTION_BLUR = "motion_blur"
    ZOOM_BLUR = "zoom_blur"
    FACIAL_DISTORTION = "facial_distortion"
    GAUSSIAN_NOISE = "gaussian_noise"
    IMPULSE_NOISE = "impulse_noise"
    SHOT_NOISE = "shot_noise"
    SPECKLE_NOISE = "speckle_noise"
    SALT_PEPPER_NOISE = "salt_pepper_noise"
    JPEG_COMPRESSION = "jpeg_compression"
    RANDOM_OCCLUSION = "random_occlusion"
    FROST = "frost"
    SPATTER = "spatter"


CATEGORIES: dict[str, tuple[str, ...]] = {
    "lighting_weather": ("brightness", "contrast", "saturate", "fog", "snow"),
    "sensor": ("defocus_blur", "color_shift", "pixelate"),
    "movement": ("motion_blur", "zoom_blur", "facial_distortion"),
    "data_processing": (
        "gaussian_noise",
        "impulse_noise",
        "shot_noise",
        "speckle_noise",
        "salt_pepper_noise",
        "jpeg_compression",
    ),
    "occlusion": ("random_occlusion", "frost", "spatter"),
}

KIND_NAMES: tuple[str, ...] = tuple(
    name for members in CATEGORIES.values() for name in members
)

CATEGORY_OF: dict[str, str] = {
    name: cat for cat, members in CATEGORIES.items() for name in members
}

# Per kind: parameter schema and the five level rows.
_TABLES: dict[str, tuple[tuple[str, ...], tuple[tuple, ...]]] = {
    "gaussian_noise": (("sigma",), ((0.08,), (0.12,), (0.18,), (0.26,), (0.38,))),
    "shot_noise": (("lam",), ((60.0,), (25.0,), (12.0,), (5.0,), (3.0,))),
    "impulse_noise": (("amount",), ((0.03,), (0.06,), (0.09,), (0.17,), (0.27,))),
    "speckle_noise": (("sigma",), ((0.15,), (0.2,), (0.35,), (0.45,), (0.6,))),
    # densities quoted as percentages of the pixel count
    "salt_pepper_noise": (
        ("density",),
        ((0.0001,), (0.0005,), (0.001,), (0.002,), (0.005,)),
    ),
    "defocus_blur": (
        ("radius", "alias_sigma"),
        ((3, 0.1), (4, 0.2), (6, 0.3), (8, 0.4), (10, 0.5)),
    ),
    "motion_blur": (
        ("radius", "sigma"),
        ((10, 3.0), (15, 5.0), (15, 8.0), (15, 12.0), (20, 15.0)),
    ),
    "zoom_blur": (
        ("z_start", "z_max"),
        ((1.01, 1.11), (1.01, 1.16), (1.01, 1.21), (1.01, 1.26), (1.01, 1.31)),
    ),
    "fog": (
        ("amount", "wibble_decay"),
        ((1.5, 2.0), (2.0, 2.0), (2.5, 1.7), (2.5, 1.5), (3.0, 1.4)),
    ),
    "frost": (
        ("alpha_image", "alpha_frost"),
        ((1.0, 0.4), (0.8, 0.6), (0.7, 0.7), (0.65, 0.7), (0.6, 0.75)),
    ),
    "snow": (
        ("loc", "scale", "zoom", "threshold", "blur_radius", "blur_sigma", "mix"),
        (
            (0.1, 0.3, 3.0, 0.5, 10, 4.0, 0.8),
            (0.2, 0.3, 2.0, 0.5, 12, 4.0, 0.7),
            (0.55, 0.3, 4.0, 0.9, 12, 8.0, 0.7),
            (0.55, 0.3, 4.5, 0.85, 12, 8.0, 0.65),
            (0.55, 0.3, 2.5, 0.85, 12, 12.0, 0.55),
        ),
    ),
    "spatter": (
        ("loc", "scale", "blur_sigma", "threshold", "intensity", "mode"),
        (
            (0.65, 0.3, 4.0, 0.69, 0.6, 0),
            (0.65, 0.3, 3.0, 0.68, 0.6, 0),
            (0.65, 0.3, 2.0, 0.68, 0.5, 0),
            (0.65, 0.3, 1.0, 0.65, 1.5, 1),
            (0.67, 0.4, 1.0, 0.65, 1.5, 1),
        ),
    ),
    "contrast": (("factor",), ((0.4,), (0.3,), (0.2,), (0.1,), (0.05,))),
    "brightness": (("delta",), ((0.1,), (0.2,), (0.3,), (0.4,), (0.5,))),
    "saturate": (
        ("factor", "offset"),
        ((0.3, 0.0), (0.1, 0.0), (2.0, 0.0), (5.0, 0.1), (20.0, 0.2)),
    ),
    "jpeg_compression": (("quality",), ((25,), (18,), (15,), (10,), (7,))),
    "pixelate": (("scale",), ((0.6,), (0.5,), (0.4,), (0.3,), (0.25,))),
    "facial_distortion": (
        ("magnitude",),
        ((0.05,), (0.065,), (0.085,), (0.1,), (0.12,)),
    ),
    # target occluded area as a fraction of the image
    "random_occlusion": (("area",), ((0.05,), (0.1,), (0.15,), (0.2,), (0.25,))),
    # maximum hue shift on the 0-180 scale
    "color_shift": (("max_shift",), ((0.0,), (7.0,), (14.0,), (21.0,), (28.0,))),
}


def validate_kind(kind) -> str:
    if isinstance(kind, CorruptionKind):
        kind = kind.value
    if kind not in _TABLES:
        raise ParameterError(f"unknown corruption kind {kind!r}")
    return kind


def validate_level(level: int) -> int:
    if not isinstance(level, int) or isinstance(level, bool) or not 1 <= level <= 5:
        raise InvalidSeverityError(f"severity level must be an integer in [1, 5], got {level!r}")
    return level


def severity_params(kind: str, level: int) -> dict:
    """Resolved hyperparameters for one (kind, level) cell."""
    kind = validate_kind(kind)
    level = validate_level(level)
    names, rows = _TABLES[kind]
    row = rows[level - 1]
    params = dict(zip(names, row))
    params["kind"] = kind
    params["level"] = level
    params["category"] = CATEGORY_OF[kind]
    return params
