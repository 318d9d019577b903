"""Loading greyscale rasters and cutting them into tiles."""
from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ImageIOError, InvalidValue, SpecError
from .feature import ProbeSet
from .proximity import DescriptiveSpace, Metric, Point, Region, discrete_metric

LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Row-major grid of intensities in [0, 1], shape ``(height, width)``."""

    intensities: np.ndarray
    name: str | None = None

    def __post_init__(self):
        a = np.array(self.intensities, dtype=np.float64)
        if a.ndim != 2 or a.size == 0:
            raise InvalidValue(f"expected a non-empty 2-D grid, got shape {a.shape}")
        if not np.isfinite(a).all() or a.min() < 0 or a.max() > 1:
            raise InvalidValue("intensities must lie in [0, 1]")
        a.setflags(write=False)
        object.__setattr__(self, "intensities", a)

    @property
    def height(self) -> int:
        return self.intensities.shape[0]

    @property
    def width(self) -> int:
        return self.intensities.shape[1]

    @classmethod
    def from_levels(cls, levels, maxval: int = 255, name=None) -> "RasterImage":
        return cls(np.asarray(levels, dtype=np.float64) / maxval, name)


# -- file formats -----------------------------------------------------------------

_TOKEN = re.compile(rb"(?:#[^\n]*\n|\s)*(\S+)")


def _pnm_header(data: bytes, count: int):
    pos = 2
    out = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise FormatError("truncated PNM header")
        try:
            out.append(int(m.group(1)))
        except ValueError:
            raise FormatError(f"bad PNM header token {m.group(1)!r}") from None
        pos = m.end()
    return out, pos


def _read_pgm(data: bytes) -> tuple[np.ndarray, int]:
    magic = data[:2]
    (w, h, maxval), pos = _pnm_header(data, 3)
    if w <= 0 or h <= 0 or not 0 < maxval < 65536:
        raise FormatError(f"invalid PGM dimensions/maxval {w}x{h}/{maxval}")
    if magic == b"P2":
        try:
            vals = np.array(data[pos:].split(), dtype=np.int64)
        except ValueError:
            raise FormatError("non-integer sample in plain PGM") from None
        if vals.size < w * h:
            raise FormatError("plain PGM has too few samples")
        vals = vals[: w * h]
    else:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        start = pos + 1  # exactly one whitespace byte after maxval
        need = w * h * dtype.itemsize
        if len(data) < start + need:
            raise FormatError("raw PGM has too few bytes")
        vals = np.frombuffer(data, dtype=dtype, count=w * h, offset=start).astype(np.int64)
    if vals.min(initial=0) < 0 or vals.max(initial=0) > maxval:
        raise FormatError("PGM sample outside [0, maxval]")
    return vals.reshape(h, w), maxval


def load_image(path: str | os.PathLike) -> RasterImage:
    """Read a PGM (P2/P5) or, with Pillow installed, a PNG file.

    Grey levels are divided by the file's maximum value (255 for 8-bit,
    65535 for 16-bit).  Colour PNGs are reduced to luma with weights
    0.299, 0.587, 0.114 before normalization.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except FileNotFoundError:
        raise ImageIOError(f"no such file: {path}") from None
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    name = os.path.basename(path)
    if data[:2] in (b"P2", b"P5"):
        levels, maxval = _read_pgm(data)
        return RasterImage(levels / maxval, name)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path, name)
    raise FormatError(f"unsupported image format: {path}")


def _read_png(path: str, name: str) -> RasterImage:
    try:
        from PIL import Image
    except ImportError:  # pragma: no cover
        raise FormatError("PNG support needs Pillow") from None
    with Image.open(path) as im:
        mode = im.mode
        if mode in ("I;16", "I;16B", "I;16L", "I"):
            a = np.asarray(im, dtype=np.float64)
            return RasterImage(a / 65535.0, name)
        if mode in ("L", "LA"):
            a = np.asarray(im.convert("L"), dtype=np.float64)
            return RasterImage(a / 255.0, name)
        rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
    return RasterImage(np.clip(rgb @ LUMA / 255.0, 0.0, 1.0), name)


def save_pgm(image: RasterImage | np.ndarray, path: str | os.PathLike, maxval: int = 255) -> None:
    """Write a binary PGM, rounding intensities to the nearest grey level."""
    a = image.intensities if isinstance(image, RasterImage) else np.asarray(image, dtype=np.float64)
    levels = np.rint(a * maxval).astype(">u2" if maxval > 255 else "u1")
    h, w = levels.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n%d\n" % (w, h, maxval))
        fh.write(levels.tobytes())


# -- spaces and tiles ----------------------------------------------------------------


def image_space(image: RasterImage, probes: ProbeSet | None = None, metric: Metric = discrete_metric) -> DescriptiveSpace:
    """The image as a descriptive space: one point per pixel, id ``row*width+col``."""
    probes = probes or ProbeSet.intensity()
    w = image.width
    pts = (
        Point(r * w + c, (r, c), (v,))
        for r, row in enumerate(image.intensities.tolist())
        for c, v in enumerate(row)
    )
    return DescriptiveSpace(pts, probes, metric, name=image.name)


_DIMS = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


@dataclass(frozen=True)
class TileSpec:
    tile_width: int
    tile_height: int
    stride_x: int | None = None
    stride_y: int | None = None

    def __post_init__(self):
        if self.stride_x is None:
            object.__setattr__(self, "stride_x", self.tile_width)
        if self.stride_y is None:
            object.__setattr__(self, "stride_y", self.tile_height)
        for name in ("tile_width", "tile_height", "stride_x", "stride_y"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SpecError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, tile: str, stride: str | None = None) -> "TileSpec":
        """``TileSpec.parse("32x32", "16x16")``; stride defaults to the tile size."""
        m = _DIMS.match(tile)
        if not m:
            raise SpecError(f"tile must look like WxH, got {tile!r}")
        tw, th = int(m.group(1)), int(m.group(2))
        sx, sy = tw, th
        if stride is not None:
            m = _DIMS.match(stride)
            if not m:
                raise SpecError(f"stride must look like SXxSY, got {stride!r}")
            sx, sy = int(m.group(1)), int(m.group(2))
        return cls(tw, th, sx, sy)

    def count(self, width: int, height: int) -> int:
        if self.tile_width > width or self.tile_height > height:
            return 0
        return ((width - self.tile_width) // self.stride_x + 1) * ((height - self.tile_height) // self.stride_y + 1)


@dataclass(frozen=True, eq=False)
class Tile(Region):
    """A rectangular region of an image space."""

    index: int = 0
    origin: tuple[int, int] = (0, 0)  # (row, col)
    size: tuple[int, int] = (1, 1)  # (height, width)

    __hash__ = Region.__hash__
    __eq__ = Region.__eq__

    def label(self) -> str:
        return f"t{self.index}@{self.origin[0]},{self.origin[1]}"


def tile(image: RasterImage, spec: TileSpec, space: DescriptiveSpace | None = None) -> list[Tile]:
    """Row-major windows of ``spec``'s size at stride offsets; partial edge windows are dropped."""
    if spec.tile_width > image.width or spec.tile_height > image.height:
        raise SpecError(
            f"tile {spec.tile_width}x{spec.tile_height} larger than image {image.width}x{image.height}"
        )
    if space is None:
        space = image_space(image)
    elif len(space) != image.width * image.height:
        raise SpecError("space does not match the image")
    w = image.width
    tiles = []
    for r in range(0, image.height - spec.tile_height + 1, spec.stride_y):
        for c in range(0, w - spec.tile_width + 1, spec.stride_x):
            ids = frozenset(
                (r + dr) * w + c + dc for dr in range(spec.tile_height) for dc in range(spec.tile_width)
            )
            tiles.append(Tile(ids, space, len(tiles), (r, c), (spec.tile_height, spec.tile_width)))
    return tiles


def region_summary(region: Region) -> dict:
    """JSON-ready description of a region: origin, dims and quantized histogram."""
    d = region.space.description
    hist = Counter(d(i) for i in region.ids)
    out = {
        "size": len(region),
        "histogram": {
            ",".join(map(str, v.levels)): n for v, n in sorted(hist.items(), key=lambda kv: kv[0].levels)
        },
    }
    if isinstance(region, Tile):
        out.update(index=region.index, origin=list(region.origin), dims=list(region.size))
    return out
