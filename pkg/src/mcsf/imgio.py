"""Binary PPM/PGM (maxval 255) reading and writing; PNG through Pillow if installed."""
import os

import numpy as np

from .core import Image
from .errors import CorruptHeader, TruncatedData, UnsupportedFormat

_MAGIC_CHANNELS = {b"P5": 1, b"P6": 3}


def _header_tokens(buf, count):
    """Pull ``count`` whitespace-separated tokens after the magic, skipping comments."""
    tokens = []
    pos = 2
    n = len(buf)
    while len(tokens) < count:
        while pos < n and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < n and buf[pos:pos + 1] == b"#":
            while pos < n and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise CorruptHeader("header ended early")
        tokens.append(buf[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not buf[pos:pos + 1].isspace():
        raise CorruptHeader("missing whitespace after maxval")
    return tokens, pos + 1


def decode_pnm(buf):
    magic = buf[:2]
    if magic not in _MAGIC_CHANNELS:
        raise UnsupportedFormat(f"not a binary PPM/PGM file (magic {magic!r})")
    tokens, offset = _header_tokens(buf, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise CorruptHeader(f"non-numeric header fields {tokens!r}") from None
    if width < 1 or height < 1:
        raise CorruptHeader(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"only maxval 255 is supported, got {maxval}")
    d = _MAGIC_CHANNELS[magic]
    need = width * height * d
    raster = buf[offset:offset + need]
    if len(raster) < need:
        raise TruncatedData(f"expected {need} sample bytes, found {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, d)
    return Image.from_interleaved(pixels.astype(np.float64))


def read_image(path):
    """Load a P5/P6 (or 8-bit PNG) file as float samples in [0, 255]."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path)
    return decode_pnm(buf)


def quantize(img):
    """Round half away from zero and clamp to [0, 255]."""
    x = img.data
    rounded = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def encode_pnm(img):
    if img.channels not in (1, 3):
        raise UnsupportedFormat(f"can only write 1 or 3 channel images, got {img.channels}")
    magic = b"P5" if img.channels == 1 else b"P6"
    q = np.moveaxis(quantize(img), 0, -1)
    return magic + f"\n{img.width} {img.height}\n255\n".encode("ascii") + q.tobytes()


def write_image(img, path):
    path = os.fspath(path)
    if path.lower().endswith(".png"):
        return _write_png(img, path)
    data = encode_pnm(img)
    with open(path, "wb") as fh:
        fh.write(data)


def _pil():
    try:
        from PIL import Image as PILImage
    except ImportError:  # pragma: no cover
        raise UnsupportedFormat("PNG support needs Pillow (pip install 'artifact[png]')") from None
    return PILImage


def _read_png(path):
    im = _pil().open(path)
    if im.mode not in ("L", "RGB", "RGBA"):
        raise UnsupportedFormat(f"unsupported PNG mode {im.mode}")
    if im.mode == "RGBA":
        im = im.convert("RGB")
    return Image.from_interleaved(np.asarray(im, dtype=np.float64))


def _write_png(img, path):
    if img.channels not in (1, 3):
        raise UnsupportedFormat(f"can only write 1 or 3 channel images, got {img.channels}")
    q = np.moveaxis(quantize(img), 0, -1)
    _pil().fromarray(q[..., 0] if img.channels == 1 else q).save(path)
