"""Escape-time slices of the absorbing set A = union of F^-n(W_R).

Each pixel records the first n with F^n(P) in W_R (or unknown after n_max),
computed with the vectorized map on numpy arrays.  Output is a binary PPM
(P6) image, row-major with the top-left pixel first.
"""

from __future__ import annotations

import colorsys
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .dynamics import MapSpec, apply_array, f_eval_array, f_sup_bound
from .errors import PreconditionError
from .series import tail_bound

__all__ = [
    "SliceSpec",
    "EscapeCell",
    "RenderResult",
    "render_slice",
    "escape_grid",
    "write_ppm",
    "read_ppm",
    "PLANES",
]

PLANES = ("re_z_re_w", "z_plane")
UNKNOWN = -1
SHADE_TOL = 1e-9


@dataclass(frozen=True)
class SliceSpec:
    """A real 2D slice of C^2.

    ``re_z_re_w``: x = Re z, y = Re w, fixed = (Im z, Im w).
    ``z_plane``:   x = Re z, y = Im z, fixed = (Re w, Im w).
    """

    plane: str
    window: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    fixed: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.plane not in PLANES:
            raise ValueError(f"plane must be one of {PLANES}")
        x0, x1, y0, y1 = self.window
        if not (x1 > x0 and y1 > y0):
            raise ValueError("window needs max > min on both axes")
        width, height = self.resolution
        if width < 1 or height < 1:
            raise ValueError("resolution must be at least 1x1")

    @property
    def width(self) -> int:
        return self.resolution[0]

    @property
    def height(self) -> int:
        return self.resolution[1]

    def pixel_xy(self, rows: Optional[range] = None):
        """Pixel-center coordinates; row 0 is the top (y = max_y) edge."""
        x0, x1, y0, y1 = self.window
        rows = range(self.height) if rows is None else rows
        xs = x0 + (np.arange(self.width) + 0.5) * ((x1 - x0) / self.width)
        ys = y1 - (np.asarray(rows, dtype=float) + 0.5) * ((y1 - y0) / self.height)
        return np.meshgrid(xs, ys)

    def coordinates(self, rows: Optional[range] = None):
        X, Y = self.pixel_xy(rows)
        a, b = self.fixed
        if self.plane == "re_z_re_w":
            return X + 1j * a, Y + 1j * b
        return X + 1j * Y, np.full(X.shape, complex(a, b))


@dataclass(frozen=True)
class EscapeCell:
    entry_index: Optional[int]
    h1_at_entry: Optional[complex] = None

    def __post_init__(self):
        if self.h1_at_entry is not None and self.entry_index is None:
            raise ValueError("h1 is only defined for cells that entered W_R")


@dataclass
class RenderResult:
    entry: np.ndarray          # int, UNKNOWN where the orbit never entered
    h1: Optional[np.ndarray]   # complex, NaN where unknown; None without shading
    image: np.ndarray          # uint8, (height, width, 3)

    def cell(self, row: int, col: int) -> EscapeCell:
        n = int(self.entry[row, col])
        if n == UNKNOWN:
            return EscapeCell(None)
        h = None if self.h1 is None else complex(self.h1[row, col])
        return EscapeCell(n, h)


def _h1_estimate(m: MapSpec, R: float, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized series value of h1 at points of W_R (display only, not certified)."""
    N = 0
    while tail_bound(m, R, N) > SHADE_TOL and N < 200:
        N += 1
    a = m.a
    k1 = np.zeros_like(z)
    k2 = np.zeros_like(z)
    zz, ww = z.copy(), w.copy()
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for j in range(1, N + 1):
            k2 += a ** (-j) * f_eval_array(m, zz)
            zz, ww = apply_array(m, zz, ww)
            k1 += a ** (-j) * f_eval_array(m, zz)
            zz, ww = apply_array(m, zz, ww)
        return (z + k1) / (w + k2)


def escape_grid(m: MapSpec, R: float, spec: SliceSpec, n_max: int,
                rows: Optional[range] = None, shade: bool = False):
    """Entry indices (and h1 at entry when ``shade``) for a block of rows."""
    z, w = spec.coordinates(rows)
    shape = z.shape
    z, w = z.ravel().copy(), w.ravel().copy()
    entry = np.full(z.shape, UNKNOWN, dtype=np.int64)
    ze = np.full(z.shape, complex(math.nan, math.nan))
    we = ze.copy()
    alive = np.arange(z.size)
    zc, wc = z, w
    for n in range(n_max + 1):
        inside = (zc.real > R) & (wc.real > R)
        if inside.any():
            hit = alive[inside]
            entry[hit] = n
            ze[hit], we[hit] = zc[inside], wc[inside]
            keep = ~inside
            alive, zc, wc = alive[keep], zc[keep], wc[keep]
        if n == n_max or alive.size == 0:
            break
        zc, wc = apply_array(m, zc, wc)
        finite = np.isfinite(zc) & np.isfinite(wc)
        if not finite.all():
            alive, zc, wc = alive[finite], zc[finite], wc[finite]
    h1 = None
    if shade:
        h1 = np.full(z.shape, complex(math.nan, math.nan))
        members = entry != UNKNOWN
        if members.any():
            h1[members] = _h1_estimate(m, R, ze[members], we[members])
        h1 = h1.reshape(shape)
    return entry.reshape(shape), h1


def palette(n_max: int) -> np.ndarray:
    """Colour per entry index; golden-ratio hue steps keep neighbours distinct."""
    colours = np.zeros((n_max + 1, 3))
    for n in range(n_max + 1):
        hue = (0.55 + 0.6180339887498949 * n) % 1.0
        colours[n] = colorsys.hsv_to_rgb(hue, 0.7, 0.95)
    return colours


def colourize(entry: np.ndarray, n_max: int, h1: Optional[np.ndarray] = None) -> np.ndarray:
    rgb = palette(n_max)[np.clip(entry, 0, n_max)]
    if h1 is not None:
        with np.errstate(invalid="ignore"):
            shade = 0.55 + 0.225 * (1.0 + np.cos(np.angle(h1)))
        rgb = rgb * np.where(np.isfinite(shade), shade, 1.0)[..., None]
    rgb[entry == UNKNOWN] = 0.0
    return np.round(rgb * 255.0).astype(np.uint8)


def write_ppm(image: np.ndarray, path: Union[str, Path]) -> None:
    image = np.ascontiguousarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError("PPM P6 needs an (height, width, 3) uint8 array")
    height, width = image.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (width, height))
        fh.write(image.tobytes())


def read_ppm(path: Union[str, Path]) -> np.ndarray:
    """Minimal P6 reader (maxval 255, whitespace-separated header, '#' comments)."""
    data = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if tokens[0] != b"P6" or int(tokens[3]) != 255:
        raise ValueError("not an 8-bit P6 file")
    width, height = int(tokens[1]), int(tokens[2])
    pixels = np.frombuffer(data[pos + 1:], dtype=np.uint8)
    if pixels.size != width * height * 3:
        raise ValueError("pixel data size does not match header")
    return pixels.reshape(height, width, 3)


def _row_block(args):
    m, R, spec, n_max, start, stop, shade = args
    return escape_grid(m, R, spec, n_max, range(start, stop), shade)


def render_slice(m: MapSpec, R: float, spec: SliceSpec, n_max: int = 100,
                 out: Optional[Union[str, Path]] = None, shade: bool = False,
                 workers: int = 1, block_rows: int = 64) -> RenderResult:
    if not (R > 0 and f_sup_bound(m, R) < (m.a - 1.0) * R):
        raise PreconditionError(f"R={R} is not admissible")
    blocks = [(m, R, spec, n_max, s, min(s + block_rows, spec.height), shade)
              for s in range(0, spec.height, block_rows)]
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_row_block, blocks))
    else:
        parts = [_row_block(b) for b in blocks]
    entry = np.concatenate([p[0] for p in parts], axis=0)
    h1 = np.concatenate([p[1] for p in parts], axis=0) if shade else None
    image = colourize(entry, n_max, h1)
    if out is not None:
        write_ppm(image, out)
    return RenderResult(entry, h1, image)
