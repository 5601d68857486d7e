"""Single-channel image container and Netpbm (PGM/PPM) input/output.

Intensities are kept as float64 so that fractional corrections survive
repeated updates; clamping and rounding to integers only happens when a
file is written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Image",
    "PnmError",
    "NumericalError",
    "read_pnm",
    "write_pnm",
    "load",
    "save",
    "diff",
    "const",
]

# Rec. 601 luma weights for the PPM convenience path.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class PnmError(ValueError):
    """Malformed or unsupported Netpbm data."""


class NumericalError(ArithmeticError):
    """Raised when an operation would produce NaN or Inf intensities."""


@dataclass(frozen=True, eq=False)
class Image:
    """Immutable grayscale image.

    Parameters
    ----------
    data : array_like
        2-D array indexed as ``(row, col)`` with the origin top-left.
    peak : float
        Maximum representable intensity (255 for 8-bit files).
    """

    data: np.ndarray
    peak: float = 255.0

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"image data must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be at least 1x1, got shape {arr.shape}")
        peak = float(self.peak)
        if not (np.isfinite(peak) and peak > 0):
            raise ValueError(f"peak must be positive and finite, got {self.peak}")
        if not np.all(np.isfinite(arr)):
            raise NumericalError("image contains NaN or Inf intensities")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "peak", peak)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def with_data(self, data) -> "Image":
        """Return a new image with the same peak and different pixels."""
        return Image(data, self.peak)

    def clamped(self) -> "Image":
        return Image(np.clip(self.data, 0.0, self.peak), self.peak)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __repr__(self):
        return f"Image({self.width}x{self.height}, peak={self.peak:g})"


def const(value: float, shape: tuple[int, int], peak: float = 255.0) -> Image:
    """Constant image of the given ``(height, width)``."""
    return Image(np.full(shape, float(value)), peak)


def diff(a: Image, b: Image) -> Image:
    """Per-pixel ``a - b`` without clamping."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return Image(a.data - b.data, a.peak)


# -- Netpbm ------------------------------------------------------------------

_WS = b" \t\n\r\v\f"


def _read_header_tokens(buf: bytes, count: int, pos: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated integers starting at ``pos``.

    Comments run from ``#`` to end of line. Returns the integers and the
    offset just past the last token.
    """
    tokens = []
    n = len(buf)
    while len(tokens) < count:
        while pos < n and (buf[pos] in _WS or buf[pos] == ord("#")):
            if buf[pos] == ord("#"):
                while pos < n and buf[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        if pos >= n:
            raise PnmError(f"unexpected end of header at byte offset {pos}")
        start = pos
        while pos < n and buf[pos] not in _WS and buf[pos] != ord("#"):
            pos += 1
        tok = buf[start:pos]
        if not tok.isdigit():
            raise PnmError(f"invalid header token {tok!r} at byte offset {start}")
        tokens.append(int(tok))
    return tokens, pos


def read_pnm(buf: bytes) -> Image:
    """Parse a PGM (P2/P5) or PPM (P3/P6) byte string.

    PPM input is reduced to luma with Rec. 601 weights. The returned image
    has ``peak`` equal to the declared maxval.
    """
    buf = bytes(buf)
    if len(buf) < 2 or buf[0:1] != b"P" or buf[1:2] not in b"2356":
        raise PnmError("bad magic number at byte offset 0")
    kind = buf[1:2].decode()
    channels = 3 if kind in "36" else 1
    (width, height, maxval), pos = _read_header_tokens(buf, 3, 2)
    if width < 1 or height < 1:
        raise PnmError(f"invalid dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise PnmError(f"maxval {maxval} outside [1, 65535]")
    nvals = width * height * channels

    if kind in "23":
        fields = re.sub(rb"#[^\r\n]*", b" ", buf[pos:]).split()
        if len(fields) < nvals:
            raise PnmError(f"size mismatch: expected {nvals} samples, found {len(fields)}")
        try:
            vals = np.array([int(f) for f in fields[:nvals]], dtype=np.float64)
        except ValueError as exc:
            raise PnmError(f"non-integer sample in raster: {exc}") from None
    else:
        if pos >= len(buf) or buf[pos] not in _WS:
            raise PnmError(f"missing whitespace after header at byte offset {pos}")
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        nbytes = nvals * dtype.itemsize
        raw = buf[pos:pos + nbytes]
        if len(raw) != nbytes:
            raise PnmError(f"size mismatch: expected {nbytes} raster bytes, found {len(raw)}")
        vals = np.frombuffer(raw, dtype=dtype).astype(np.float64)

    if np.any(vals > maxval):
        raise PnmError(f"sample exceeds maxval {maxval}")
    if channels == 3:
        vals = vals.reshape(height, width, 3) @ np.array(LUMA_WEIGHTS)
    return Image(vals.reshape(height, width), float(maxval))


def _quantize(img: Image) -> np.ndarray:
    # round half away from zero; values are non-negative after the clip
    return np.floor(np.clip(img.data, 0.0, img.peak) + 0.5).astype(np.int64)


def write_pnm(img: Image, mode: str = "binary") -> bytes:
    """Encode ``img`` as PGM, clamping to ``[0, peak]`` and rounding.

    ``mode`` is ``"ascii"`` (P2) or ``"binary"`` (P5).
    """
    maxval = int(round(img.peak))
    if img.peak > 65535:
        raise PnmError(f"unsupported depth: peak {img.peak:g} exceeds 65535")
    if maxval != img.peak:
        raise PnmError(f"peak must be an integer to be written, got {img.peak:g}")
    pix = np.minimum(_quantize(img), maxval)
    header = f"{img.width} {img.height}\n{maxval}\n"
    if mode == "ascii":
        rows = "\n".join(" ".join(map(str, row)) for row in pix)
        return f"P2\n{header}{rows}\n".encode("ascii")
    if mode == "binary":
        dtype = ">u2" if maxval > 255 else "u1"
        return f"P5\n{header}".encode("ascii") + pix.astype(dtype).tobytes()
    raise ValueError(f"mode must be 'ascii' or 'binary', got {mode!r}")


def load(path) -> Image:
    return read_pnm(Path(path).read_bytes())


def save(img: Image, path, mode: str = "binary") -> None:
    Path(path).write_bytes(write_pnm(img, mode))
