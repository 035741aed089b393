"""Image loading, saving and resizing on top of Pillow.

All in-memory images are RGB uint8 arrays of shape (H, W, 3).
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image


class ImageDecodeError(Exception):
    """Raised when an image file cannot be read or decoded."""


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Load an image file as an RGB uint8 array (H, W, 3)."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise ImageDecodeError(f"image not found: {path}") from None
    except Exception as exc:
        raise ImageDecodeError(f"cannot decode image {path}: {exc}") from exc


def save_image(image: np.ndarray, path: str | os.PathLike) -> None:
    """Write an RGB uint8 array to disk (format from the extension)."""
    Image.fromarray(np.asarray(image, dtype=np.uint8), mode="RGB").save(path)


def resize_image(image: np.ndarray, size: tuple[int, int]) -> np.ndarray:
    """Resize to (width, height) with bilinear interpolation."""
    pil = Image.fromarray(np.asarray(image, dtype=np.uint8), mode="RGB")
    return np.asarray(pil.resize(size, Image.BILINEAR), dtype=np.uint8)


def to_float_chw(image: np.ndarray) -> np.ndarray:
    """uint8 HWC image -> float32 CHW in [0, 1], the model input layout."""
    return np.ascontiguousarray(image.transpose(2, 0, 1), dtype=np.float32) / 255.0
