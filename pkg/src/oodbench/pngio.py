"""Small PNG reader/writer.

Writing always emits non-interlaced 8-bit with filter type 0 and a
fixed zlib level, so output bytes depend only on the pixels.  Reading
covers non-interlaced 8-bit grayscale, RGB and RGBA with any standard
row filter, which is everything this toolkit and its tests produce.
"""

import struct
import zlib

import numpy as np

from .errors import CorruptFileError, FormatError

_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def write_png(img: np.ndarray) -> bytes:
    """Serialize (H, W) gray or (H, W, 3) RGB uint8 pixels."""
    if img.dtype != np.uint8:
        raise FormatError("PNG writer expects uint8 pixels")
    if img.ndim == 2:
        color_type = 0
        rows = img[:, :, None]
    elif img.ndim == 3 and img.shape[2] == 3:
        color_type = 2
        rows = img
    else:
        raise FormatError(f"unsupported PNG shape {img.shape}")
    h, w = img.shape[0], img.shape[1]
    raw = bytearray()
    for y in range(h):
        raw.append(0)  # filter type none
        raw += rows[y].tobytes()
    ihdr = struct.pack(">IIBBBBB", w, h, 8, color_type, 0, 0, 0)
    return (
        _SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(bytes(raw), 6))
        + _chunk(b"IEND", b"")
    )


def _defilter(raw: bytes, h: int, w: int, channels: int) -> np.ndarray:
    stride = w * channels
    out = np.zeros((h, stride), dtype=np.uint8)
    pos = 0
    prev = np.zeros(stride, dtype=np.int32)
    for y in range(h):
        ftype = raw[pos]
        pos += 1
        line = np.frombuffer(raw, dtype=np.uint8, count=stride, offset=pos).astype(np.int32)
        pos += stride
        if ftype == 0:
            cur = line
        elif ftype == 1:  # sub
            cur = line.copy()
            for x in range(channels, stride):
                cur[x] = (cur[x] + cur[x - channels]) & 0xFF
        elif ftype == 2:  # up
            cur = (line + prev) & 0xFF
        elif ftype == 3:  # average
            cur = line.copy()
            for x in range(stride):
                left = cur[x - channels] if x >= channels else 0
                cur[x] = (cur[x] + ((left + prev[x]) >> 1)) & 0xFF
        elif ftype == 4:  # paeth
            cur = line.copy()
            for x in range(stride):
                a = int(cur[x - channels]) if x >= channels else 0
                b = int(prev[x])
                c = int(prev[x - channels]) if x >= channels else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                if pa <= pb and pa <= pc:
                    pred = a
                elif pb <= pc:
                    pred = b
                else:
                    pred = c
                cur[x] = (cur[x] + pred) & 0xFF
        else:
            raise CorruptFileError(f"unknown PNG filter type {ftype}")
        out[y] = cur.astype(np.uint8)
        prev = cur
    return out.reshape(h, w, channels)


def read_png(data: bytes) -> np.ndarray:
    """Decode to (H, W) for grayscale input or (H, W, 3) otherwise."""
    if data[: len(_SIGNATURE)] != _SIGNATURE:
        raise FormatError("not a PNG stream")
    pos = len(_SIGNATURE)
    width = height = None
    color_type = bit_depth = None
    idat = bytearray()
    while pos < len(data):
        (length,) = struct.unpack_from(">I", data, pos)
        tag = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        pos += 12 + length
        if tag == b"IHDR":
            width, height, bit_depth, color_type, comp, filt, interlace = struct.unpack(
                ">IIBBBBB", payload
            )
            if bit_depth != 8:
                raise FormatError("only 8-bit PNG supported")
            if interlace != 0:
                raise FormatError("interlaced PNG not supported")
            if color_type not in (0, 2, 6):
                raise FormatError(f"unsupported PNG color type {color_type}")
        elif tag == b"IDAT":
            idat += payload
        elif tag == b"IEND":
            break
    if width is None or not idat:
        raise CorruptFileError("PNG stream missing IHDR or IDAT")
    channels = {0: 1, 2: 3, 6: 4}[color_type]
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise CorruptFileError(f"PNG deflate stream corrupt: {exc}") from exc
    expected = height * (width * channels + 1)
    if len(raw) != expected:
        raise CorruptFileError("PNG pixel data has wrong length")
    px = _defilter(raw, height, width, channels)
    if channels == 1:
        return px[:, :, 0]
    if channels == 4:
        return px[:, :, :3].copy()
    return px
