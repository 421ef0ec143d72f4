"""Domain-coloring images of slice restrictions, written as binary PPM.

On the slice C(i) of a frame, f = F1 + F2 j.  Hue encodes arg F1, value
is 0.25 + 0.75 (1 - 2^-|f|), and saturation is |F1| / |f|, so a purely
j-directed value shows grey.
"""

from pathlib import Path

import numpy as np

from .quaternion import frame_coords, slice_point
from .series import evaluate_unchecked

BACKGROUND = 255


def slice_field(f, frame, size):
    """Sample f on a size x size grid over [-1, 1]^2 of the slice C(frame.i).

    Returns (F1, magnitude, inside) arrays; rows run top to bottom (y
    decreasing).
    """
    t = (np.arange(size) + 0.5) / size * 2.0 - 1.0
    x, y = np.meshgrid(t, -t)
    inside = x**2 + y**2 < 1.0
    pts = slice_point(x[inside], y[inside], frame.i)
    vals = evaluate_unchecked(f, pts)
    d = frame_coords(vals, frame)
    F1 = np.zeros((size, size), dtype=np.complex128)
    mag = np.zeros((size, size))
    F1[inside] = d[:, 0] + 1j * d[:, 1]
    mag[inside] = np.linalg.norm(vals, axis=-1)
    return F1, mag, inside


def _hsv_to_rgb(h, s, v):
    h6 = (h % 1.0) * 6.0
    k = np.floor(h6).astype(int) % 6
    fpart = h6 - np.floor(h6)
    p = v * (1.0 - s)
    q = v * (1.0 - s * fpart)
    t = v * (1.0 - s * (1.0 - fpart))
    choices = [
        (v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q),
    ]
    rgb = np.zeros(h.shape + (3,))
    for idx, (r, g, b) in enumerate(choices):
        m = k == idx
        rgb[m, 0] = r[m]
        rgb[m, 1] = g[m]
        rgb[m, 2] = b[m]
    return rgb


def render(f, frame, size=256):
    """RGB uint8 image of shape (size, size, 3)."""
    F1, mag, inside = slice_field(f, frame, size)
    hue = np.where(np.abs(F1) > 0.0, np.angle(F1) / (2.0 * np.pi), 0.0)
    sat = np.where(mag > 0.0, np.abs(F1) / np.where(mag > 0.0, mag, 1.0), 0.0)
    val = 0.25 + 0.75 * (1.0 - 0.5**mag)
    rgb = _hsv_to_rgb(hue, np.clip(sat, 0.0, 1.0), val)
    img = np.full((size, size, 3), BACKGROUND, dtype=np.uint8)
    img[inside] = np.round(rgb[inside] * 255.0).astype(np.uint8)
    return img


def write_ppm(path, img):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w, _ = img.shape
    Path(path).write_bytes(b"P6\n%d %d\n255\n" % (w, h) + img.tobytes())


def read_ppm(path):
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM file")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)
