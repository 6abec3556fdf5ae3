import pytest

from oodbench.errors import InvalidSeverityError, ParameterError
from oodbench.params import CATEGORIES, CATEGORY_OF, KIND_NAMES, severity_params


def test_twenty_kinds_in_five_categories():
    assert len(KIND_NAMES) == 20
    assert len(set(KIND_NAMES)) == 20
    assert len(CATEGORIES) == 5
    sizes = {cat: len(members) for cat, members in CATEGORIES.items()}
    assert sizes == {
        "lighting_weather": 5,
        "sensor": 3,
        "movement": 3,
        "data_processing": 6,
        "occlusion": 3,
    }


def test_every_kind_has_exactly_one_category():
    seen = [k for members in CATEGORIES.values() for k in members]
    assert sorted(seen) == sorted(KIND_NAMES)
    assert CATEGORY_OF["fog"] == "lighting_weather"
    assert CATEGORY_OF["jpeg_compression"] == "data_processing"
    assert CATEGORY_OF["frost"] == "occlusion"


@pytest.mark.parametrize(
    "kind,level,key,value",
    [
        ("gaussian_noise", 1, "sigma", 0.08),
        ("gaussian_noise", 3, "sigma", 0.18),
        ("gaussian_noise", 5, "sigma", 0.38),
        ("shot_noise", 1, "lam", 60.0),
        ("shot_noise", 5, "lam", 3.0),
        ("impulse_noise", 4, "amount", 0.17),
        ("speckle_noise", 3, "sigma", 0.35),
        ("salt_pepper_noise", 5, "density", 0.005),
        ("defocus_blur", 1, "radius", 3),
        ("defocus_blur", 5, "radius", 10),
        ("motion_blur", 5, "radius", 20),
        ("motion_blur", 5, "sigma", 15.0),
        ("zoom_blur", 1, "z_max", 1.11),
        ("zoom_blur", 5, "z_max", 1.31),
        ("fog", 1, "amount", 1.5),
        ("fog", 1, "wibble_decay", 2.0),
        ("fog", 5, "wibble_decay", 1.4),
        ("frost", 1, "alpha_image", 1.0),
        ("frost", 1, "alpha_frost", 0.4),
        ("contrast", 1, "factor", 0.4),
        ("contrast", 5, "factor", 0.05),
        ("brightness", 3, "delta", 0.3),
        ("saturate", 4, "factor", 5.0),
        ("saturate", 4, "offset", 0.1),
        ("jpeg_compression", 1, "quality", 25),
        ("jpeg_compression", 5, "quality", 7),
        ("pixelate", 5, "scale", 0.25),
        ("facial_distortion", 2, "magnitude", 0.065),
        ("random_occlusion", 5, "area", 0.25),
        ("color_shift", 1, "max_shift", 0.0),
        ("color_shift", 5, "max_shift", 28.0),
        ("snow", 1, "mix", 0.8),
        ("snow", 5, "blur_sigma", 12.0),
        ("spatter", 1, "mode", 0),
        ("spatter", 4, "mode", 1),
    ],
)
def test_table_values(kind, level, key, value):
    assert severity_params(kind, level)[key] == value


def test_full_grid_resolves():
    rows = [severity_params(k, l) for k in KIND_NAMES for l in range(1, 6)]
    assert len(rows) == 100
    for row in rows:
        assert row["category"] == CATEGORY_OF[row["kind"]]


def test_level_out_of_range():
    for level in (0, 6, -1):
        with pytest.raises(InvalidSeverityError):
            severity_params("fog", level)
    with pytest.raises(InvalidSeverityError):
        severity_params("fog", "3")


def test_unknown_kind():
    with pytest.raises(ParameterError):
        severity_params("glass_blur", 1)
