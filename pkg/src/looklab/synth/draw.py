"""Tiny numpy rasterizer: disks, thick lines, filled rectangles."""

from __future__ import annotations

import numpy as np


def fill_rect(img: np.ndarray, x0: float, y0: float, x1: float, y1: float,
              color: tuple[int, int, int]) -> None:
    h, w = img.shape[:2]
    xa = max(0, int(round(x0)))
    ya = max(0, int(round(y0)))
    xb = min(w, int(round(x1)))
    yb = min(h, int(round(y1)))
    if xa < xb and ya < yb:
        img[ya:yb, xa:xb] = color


def paste_patch(img: np.ndarray, x0: float, y0: float, patch: np.ndarray) -> None:
    """Paste a patch with top-left corner at (x0, y0), clipped to the image."""
    h, w = img.shape[:2]
    ph, pw = patch.shape[:2]
    xa, ya = int(round(x0)), int(round(y0))
    sx0 = max(0, -xa)
    sy0 = max(0, -ya)
    dx0 = max(0, xa)
    dy0 = max(0, ya)
    dx1 = min(w, xa + pw)
    dy1 = min(h, ya + ph)
    if dx0 < dx1 and dy0 < dy1:
        img[dy0:dy1, dx0:dx1] = patch[sy0:sy0 + (dy1 - dy0), sx0:sx0 + (dx1 - dx0)]


def fill_disk(img: np.ndarray, cx: float, cy: float, r: float,
              color: tuple[int, int, int]) -> None:
    h, w = img.shape[:2]
    x0 = max(0, int(np.floor(cx - r)))
    x1 = min(w, int(np.ceil(cx + r)) + 1)
    y0 = max(0, int(np.floor(cy - r)))
    y1 = min(h, int(np.ceil(cy + r)) + 1)
    if x0 >= x1 or y0 >= y1:
        return
    ys, xs = np.mgrid[y0:y1, x0:x1]
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= r**2
    img[y0:y1, x0:x1][mask] = color


def draw_line(img: np.ndarray, x0: float, y0: float, x1: float, y1: float,
              thickness: float, color: tuple[int, int, int]) -> None:
    """Stamp disks along the segment; good enough at sprite scale."""
    length = float(np.hypot(x1 - x0, y1 - y0))
    steps = max(2, int(np.ceil(length * 2)))
    for t in np.linspace(0.0, 1.0, steps):
        fill_disk(img, x0 + t * (x1 - x0), y0 + t * (y1 - y0), thickness / 2, color)


def hsv_color(hue: float, saturation: float = 1.0, value: float = 1.0) -> tuple[int, int, int]:
    import colorsys

    r, g, b = colorsys.hsv_to_rgb(hue % 1.0, saturation, value)
    return (int(round(r * 255)), int(round(g * 255)), int(round(b * 255)))
