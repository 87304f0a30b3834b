"""Grayscale image representation and bit-exact PGM (P5/P2) I/O.

All pipeline stages work on float64 pixels; quantization back to 8-bit
happens only when saving. The replicate (clamp) border policy used by
every stencil in the pipeline lives here as ``sample_pixel_clamped``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class PgmFormatError(ValueError):
    """Malformed PGM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class GrayImage:
    """Dense 2-D grid of float64 intensities, nominally in [0, 255]."""

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be >= 1, got {self.width}x{self.height}")
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.size != self.width * self.height:
            raise ValueError(
                f"pixel count {px.size} does not match {self.width}x{self.height}"
            )
        if not np.all(np.isfinite(px)):
            raise ValueError("pixels contain NaN or Inf")
        px = px.reshape(self.height, self.width)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, arr) -> "GrayImage":
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got ndim={arr.ndim}")
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)


def sample_pixel_clamped(img: GrayImage, x: int, y: int) -> float:
    """Read pixel (x, y) with replicate-border clamping for out-of-range indices."""
    cx = min(max(x, 0), img.width - 1)
    cy = min(max(y, 0), img.height - 1)
    return float(img.pixels[cy, cx])


def _next_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    """Skip whitespace and '#' comments, return (token, token_start, next_pos)."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise PgmFormatError("unexpected end of header", pos)
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, start, pos = _next_token(data, pos)
    if not tok.isdigit():
        raise PgmFormatError(f"non-numeric {what} token {tok!r}", start)
    return int(tok), pos


def load_pgm(data: bytes) -> GrayImage:
    """Decode binary (P5) or ASCII (P2) PGM bytes, maxval <= 255."""
    magic, magic_at, pos = _next_token(data, 0)
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"bad magic number {magic!r}, expected P5 or P2", magic_at)
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmFormatError(f"bad dimensions {width}x{height}", pos)
    if maxval < 1 or maxval > 255:
        raise PgmFormatError(f"maxval {maxval} out of supported range 1..255", pos)
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the payload
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PgmFormatError("missing whitespace after maxval", pos)
        pos += 1
        payload = data[pos : pos + count]
        if len(payload) < count:
            raise PgmFormatError(
                f"truncated payload: expected {count} bytes, got {len(payload)}", len(data)
            )
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    else:
        values = np.empty(count, dtype=np.float64)
        for i in range(count):
            try:
                v, pos = _header_int(data, pos, "pixel")
            except PgmFormatError as err:
                raise PgmFormatError(f"truncated payload: pixel {i} of {count} missing", err.offset)
            values[i] = v
    if values.max(initial=0) > maxval:
        raise PgmFormatError(f"pixel value exceeds maxval {maxval}", pos)
    return GrayImage(width=width, height=height, pixels=values)


def save_pgm(img: GrayImage) -> bytes:
    """Encode as binary P5, rounding intensities half-away-from-zero to 8 bits."""
    px = img.pixels
    if px.min() < -0.5 or px.max() >= 255.5:
        raise ValueError(
            f"intensity range [{px.min()}, {px.max()}] outside representable [-0.5, 255.5)"
        )
    # half-away-from-zero; pixels are >= -0.5 here so floor(x + 0.5) matches
    quantized = np.floor(px + 0.5).astype(np.uint8)
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + quantized.tobytes()
