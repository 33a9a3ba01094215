"""Gradient orientation features on the unit complex sphere.

The feature front-end: forward pixel differences of first and second
order, the four-quadrant orientation angle of each gradient vector, and
the embedding of an angle field as a unit-modulus complex vector.
Orientation features are invariant to positive rescaling and to constant
shifts of the image intensities, which is what makes them robust to
illumination-style corruption.

Conventions, applied identically everywhere:

* ``x`` indexes columns and ``y`` indexes rows, so the horizontal
  gradient differences along axis 1 and the vertical gradient along
  axis 0.
* Differences are undefined at the trailing border (one row/column for
  first order, two for second order); those entries are zero so every
  field keeps the source image shape.
* A zero gradient vector gets angle 0.
* Fields are vectorized column-major, giving a vector of length
  ``K = rows * cols`` with Euclidean norm ``sqrt(K)`` after the complex
  mapping.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NumericError

FEATURE_ORDERS = ("raw", "first", "second")

_TWO_PI = 2.0 * np.pi


class GradientPair(NamedTuple):
    """Horizontal (gx) and vertical (gy) gradient fields of one image."""

    gx: np.ndarray
    gy: np.ndarray


def _check_image(img: np.ndarray, min_side: int, what: str) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise NumericError(f"{what} expects a 2-D image, got shape {img.shape}")
    if min(img.shape) < min_side:
        raise NumericError(
            f"{what} needs at least {min_side} pixels per axis, got {img.shape[0]}x{img.shape[1]}"
        )
    return img


def first_order_gradients(img: np.ndarray) -> GradientPair:
    """Forward differences between adjacent pixels.

    ``gx[y, x] = img[y, x+1] - img[y, x]`` and
    ``gy[y, x] = img[y+1, x] - img[y, x]``; the last column of gx and the
    last row of gy are zero.
    """
    img = _check_image(img, 2, "first_order_gradients")
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    gx[:, :-1] = img[:, 1:] - img[:, :-1]
    gy[:-1, :] = img[1:, :] - img[:-1, :]
    return GradientPair(gx, gy)


def second_order_gradients(img: np.ndarray) -> GradientPair:
    """Forward differences of the first-order gradients, along the same axis.

    ``g2x[y, x] = gx[y, x+1] - gx[y, x]`` wherever both first-order values
    are defined, and likewise for ``g2y`` down rows.  The last two columns
    of g2x and the last two rows of g2y are zero.  Second differences
    cancel any linear intensity trend exactly.
    """
    img = _check_image(img, 3, "second_order_gradients")
    gx, gy = first_order_gradients(img)
    g2x = np.zeros_like(img)
    g2y = np.zeros_like(img)
    g2x[:, :-2] = gx[:, 1:-1] - gx[:, :-2]
    g2y[:-2, :] = gy[1:-1, :] - gy[:-2, :]
    return GradientPair(g2x, g2y)


def orientation_field(grad: GradientPair) -> np.ndarray:
    """Per-pixel gradient direction in [0, 2*pi).

    The angle is the four-quadrant arctangent of (gy, gx); negative
    angles are wrapped up by one turn, and a zero gradient maps to 0.
    """
    gx, gy = grad
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    if gx.shape != gy.shape:
        raise NumericError(f"gradient fields disagree in shape: {gx.shape} vs {gy.shape}")
    angles = np.arctan2(gy, gx)
    angles = np.where(angles < 0.0, angles + _TWO_PI, angles)
    # wrapping a tiny negative angle can round up to exactly 2*pi
    return np.where(angles >= _TWO_PI, 0.0, angles)


def complex_map(angles: np.ndarray) -> np.ndarray:
    """Map an angle field onto the complex sphere of radius sqrt(K).

    Angles are vectorized column-major into a length-K vector ``phi`` and
    each entry becomes ``cos(phi) + 1j*sin(phi)``, a unit-modulus complex
    number.
    """
    phi = np.ravel(np.asarray(angles, dtype=np.float64), order="F")
    return np.exp(1j * phi)


def extract(img: np.ndarray, order: str) -> np.ndarray:
    """Feature vector of one image for the requested gradient order.

    ``second`` and ``first`` run gradients -> orientation -> complex map;
    ``raw`` is the column-major intensity vector (cast to complex so all
    three orders share one downstream code path).
    """
    if order == "second":
        return complex_map(orientation_field(second_order_gradients(img)))
    if order == "first":
        return complex_map(orientation_field(first_order_gradients(img)))
    if order == "raw":
        img = _check_image(img, 1, "extract")
        return np.ravel(img, order="F").astype(np.complex128)
    raise NumericError(f"unknown feature order {order!r} (expected one of {', '.join(FEATURE_ORDERS)})")
