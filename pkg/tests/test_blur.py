import numpy as np
import pytest

from oodbench.corruptions import apply_blur, apply_corruption
from oodbench.errors import ParameterError
from oodbench.image import from_float, to_float
from oodbench.ops import motion_kernel
from oodbench.params import severity_params
from oodbench.rng import Prng


def test_zoom_with_empty_factor_list_is_identity(ref_image):
    params = dict(severity_params("zoom_blur", 1))
    params["z_max"] = 1.01
    out = apply_blur(ref_image, "zoom_blur", params, Prng(0))
    assert np.array_equal(out, ref_image)


def test_defocus_constant_image_within_rounding(gray_image):
    out = apply_corruption(gray_image, "defocus_blur", 3, 0)
    assert np.abs(out.astype(int) - 128).max() <= 1


def test_motion_blur_step_edge_matches_line_oracle(ref_image):
    """Angle-zero kernel on a vertical step equals a 1-D convolution."""
    h = w = 64
    img = np.zeros((h, w, 3), dtype=np.uint8)
    img[:, w // 2 :] = 255
    radius, sigma = 10, 3.0
    kernel = motion_kernel(radius, sigma, 0.0)
    # oracle: per row, convolve the step profile with the gaussian taps
    taps = np.exp(-(np.arange(-radius, radius + 1) ** 2) / (2 * sigma * sigma))
    taps /= taps.sum()
    profile = np.zeros(w)
    profile[w // 2 :] = 1.0

    def refl(i, n):
        period = 2 * (n - 1)
        m = i % period
        return period - m if m >= n else m

    expect = np.array(
        [sum(taps[k + radius] * profile[refl(x + k, w)] for k in range(-radius, radius + 1)) for x in range(w)]
    )
    from oodbench.ops import convolve

    out = from_float(convolve(to_float(img), kernel))
    got = out[h // 2, :, 0].astype(np.float64) / 255.0
    assert np.abs(got - expect).max() < 1.5 / 255.0


def test_motion_blur_angle_drawn_from_seed(ref_image):
    a = apply_corruption(ref_image, "motion_blur", 3, 1)
    b = apply_corruption(ref_image, "motion_blur", 3, 2)
    assert not np.array_equal(a, b)


def test_zoom_blur_darkens_nothing_on_constant(gray_image):
    out = apply_corruption(gray_image, "zoom_blur", 5, 3)
    assert np.abs(out.astype(int) - 128).max() <= 1


@pytest.mark.parametrize("kind", ["defocus_blur", "motion_blur", "zoom_blur"])
def test_blur_determinism_and_shape(kind, ref_image):
    a = apply_corruption(ref_image, kind, 4, 99)
    b = apply_corruption(ref_image, kind, 4, 99)
    assert np.array_equal(a, b)
    assert a.shape == ref_image.shape


def test_family_rejects_foreign_kind(ref_image):
    with pytest.raises(ParameterError):
        apply_blur(ref_image, "gaussian_noise", severity_params("gaussian_noise", 1), Prng(0))
