import colorsys
import math

import numpy as np
import pytest

from slice_bergman.bergman import kernel_function
from slice_bergman.plot import read_ppm, render, slice_field, write_ppm
from slice_bergman.quaternion import ONE, Frame, quat, random_frame
from slice_bergman.series import SliceRegularSeries as S


def hue_at(img, row, col):
    r, g, b = img[row, col] / 255.0
    return colorsys.rgb_to_hsv(r, g, b)[0]


def winding(img, radius=0.5, steps=360):
    size = img.shape[0]
    total = 0.0
    prev = None
    for t in np.linspace(0, 2 * np.pi, steps + 1):
        col = int((radius * np.cos(t) + 1) / 2 * size)
        row = int((1 - radius * np.sin(t)) / 2 * size)
        h = hue_at(img, row, col)
        if prev is not None:
            total += (h - prev + 0.5) % 1.0 - 0.5
        prev = h
    return total


def test_constant_one_has_constant_hue(std):
    img = render(S.constant(ONE), std, 64)
    _, _, inside = slice_field(S.constant(ONE), std, 64)
    colors = np.unique(img[inside], axis=0)
    assert len(colors) == 1
    assert np.all(img[~inside] == 255)


def test_identity_winds_once(rng):
    img = render(S.monomial(1), random_frame(rng), 128)
    assert round(winding(img)) == 1


def test_square_winds_twice(std):
    assert round(winding(render(S.monomial(2), std, 128))) == 2


def test_kernel_at_origin_is_constant_one_over_pi(std):
    K = kernel_function(quat(), 16)
    F1, mag, inside = slice_field(K, std, 32)
    np.testing.assert_allclose(F1[inside], 1 / math.pi, atol=1e-15)
    img = render(K, std, 32)
    assert len(np.unique(img[inside], axis=0)) == 1
    v = 0.25 + 0.75 * (1 - 0.5 ** (1 / math.pi))
    assert img[16, 16, 0] == round(v * 255)


def test_pure_j_values_are_grey():
    fr = Frame.standard()
    img = render(S.constant(quat(0, 0, 1)), fr, 16)
    r, g, b = img[8, 8].astype(int)
    assert r == g == b


def test_ppm_round_trip(tmp_path, std):
    img = render(S.monomial(3), std, 40)
    p = tmp_path / "x.ppm"
    write_ppm(p, img)
    assert p.read_bytes().startswith(b"P6\n40 40\n255\n")
    np.testing.assert_array_equal(read_ppm(p), img)


def test_deterministic(std):
    f = S.random(np.random.default_rng(5), 8)
    assert render(f, std, 50).tobytes() == render(f, std, 50).tobytes()


def test_read_rejects_other_formats(tmp_path):
    p = tmp_path / "x.ppm"
    p.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ValueError):
        read_ppm(p)
