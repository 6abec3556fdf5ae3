"""Minimal baseline JPEG codec.

Encodes 8-bit RGB as baseline sequential JPEG (JFIF, 4:2:0 chroma
subsampling, standard quantization and Huffman tables, IJG-style
quality scaling) and decodes the streams it produces.  Implemented in
process so the compression artifact is identical everywhere and never
drifts with an external codec version.

The decoder handles baseline Huffman streams with one component or
with three components sampled 4:2:0 or 4:4:4; that covers everything
the encoder emits.
"""

import struct

import numpy as np

from .errors import CorruptFileError, FormatError

ZIGZAG = np.array([
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
], dtype=np.int64)

_LUMA_QUANT = np.array([
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
], dtype=np.float64)

_CHROMA_QUANT = np.array([
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
], dtype=np.float64)

_DC_LUMA = (
    bytes([0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]),
    bytes(range(12)),
)
_DC_CHROMA = (
    bytes([0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0]),
    bytes(range(12)),
)
_AC_LUMA = (
    bytes([0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125]),
    bytes([
        1, 2, 3, 0, 4, 17, 5, 18, 33, 49, 65, 6, 19, 81, 97, 7, 34, 113,
        20, 50, 129, 145, 161, 8, 35, 66, 177, 193, 21, 82, 209, 240, 36, 51, 98, 114,
        130, 9, 10, 22, 23, 24, 25, 26, 37, 38, 39, 40, 41, 42, 52, 53, 54, 55,
        56, 57, 58, 67, 68, 69, 70, 71, 72, 73, 74, 83, 84, 85, 86, 87, 88, 89,
        90, 99, 100, 101, 102, 103, 104, 105, 106, 115, 116, 117, 118, 119, 120, 121,
        122, 131, 132, 133, 134, 135, 136, 137, 138, 146, 147, 148, 149, 150, 151, 152,
        153, 154, 162, 163, 164, 165, 166, 167, 168, 169, 170, 178, 179, 180, 181, 182,
        183, 184, 185, 186, 194, 195, 196, 197, 198, 199, 200, 201, 202, 210, 211, 212,
        213, 214, 215, 216, 217, 218, 225, 226, 227, 228, 229, 230, 231, 232, 233, 234,
        241, 242, 243, 244, 245, 246, 247, 248, 249, 250,
    ]),
)
_AC_CHROMA = (
    bytes([0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119]),
    bytes([
        0, 1, 2, 3, 17, 4, 5, 33, 49, 6, 18, 65, 81, 7, 97, 113, 19, 34,
        50, 129, 8, 20, 66, 145, 161, 177, 193, 9, 35, 51, 82, 240, 21, 98, 114, 209,
        10, 22, 36, 52, 225, 37, 241, 23, 24, 25, 26, 38, 39, 40, 41, 42, 53, 54,
        55, 56, 57, 58, 67, 68, 69, 70, 71, 72, 73, 74, 83, 84, 85, 86, 87, 88,
        89, 90, 99, 100, 101, 102, 103, 104, 105, 106, 115, 116, 117, 118, 119, 120,
        121, 122, 130, 131, 132, 133, 134, 135, 136, 137, 138, 146, 147, 148, 149, 150,
        151, 152, 153, 154, 162, 163, 164, 165, 166, 167, 168, 169, 170, 178, 179, 180,
        181, 182, 183, 184, 185, 186, 194, 195, 196, 197, 198, 199, 200, 201, 202, 210,
        211, 212, 213, 214, 215, 216, 217, 218, 226, 227, 228, 229, 230, 231, 232, 233,
        234, 242, 243, 244, 245, 246, 247, 248, 249, 250,
    ]),
)


def _dct_matrix() -> np.ndarray:
    xs = np.arange(8, dtype=np.float64)
    c = np.cos((2.0 * xs[None, :] + 1.0) * xs[:, None] * np.pi / 16.0)
    c *= 0.5
    c[0, :] = np.sqrt(1.0 / 8.0)
    return c


_DCT = _dct_matrix()


def _quant_tables(quality: int) -> tuple[np.ndarray, np.ndarray]:
    quality = min(max(int(quality), 1), 100)
    scale = 5000.0 / quality if quality < 50 else 200.0 - 2.0 * quality
    out = []
    for base in (_LUMA_QUANT, _CHROMA_QUANT):
        q = np.floor((base * scale + 50.0) / 100.0)
        out.append(np.clip(q, 1, 255))
    return out[0], out[1]


def _build_codes(counts: bytes, values: bytes) -> dict[int, tuple[int, int]]:
    codes: dict[int, tuple[int, int]] = {}
    code = 0
    pos = 0
    for length in range(1, 17):
        for _ in range(counts[length - 1]):
            codes[values[pos]] = (code, length)
            pos += 1
            code += 1
        code <<= 1
    return codes


class _BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, code: int, length: int) -> None:
        self.acc = (self.acc << length) | (code & ((1 << length) - 1))
        self.nbits += length
        while self.nbits >= 8:
            byte = (self.acc >> (self.nbits - 8)) & 0xFF
            self.nbits -= 8
            self.acc &= (1 << self.nbits) - 1
            self.buf.append(byte)
            if byte == 0xFF:
                self.buf.append(0x00)

    def flush(self) -> bytes:
        if self.nbits:
            pad = 8 - self.nbits
            self.write((1 << pad) - 1, pad)
        return bytes(self.buf)


def _magnitude(v: int) -> tuple[int, int]:
    """JPEG category and payload bits for a coefficient difference."""
    if v == 0:
        return 0, 0
    a = abs(v)
    t = a.bit_length()
    bits = v if v > 0 else v + (1 << t) - 1
    return t, bits


def _rgb_to_ycbcr(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    f = img.astype(np.float64)
    r, g, b = f[..., 0], f[..., 1], f[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = -0.168735892 * r - 0.331264108 * g + 0.5 * b + 128.0
    cr = 0.5 * r - 0.418687589 * g - 0.081312411 * b + 128.0
    return y, cb, cr


def _ycbcr_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    r = y + 1.402 * (cr - 128.0)
    g = y - 0.344136286 * (cb - 128.0) - 0.714136286 * (cr - 128.0)
    b = y + 1.772 * (cb - 128.0)
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def _pad_edge(plane: np.ndarray, mult: int) -> np.ndarray:
    h, w = plane.shape
    ph = (-h) % mult
    pw = (-w) % mult
    if ph or pw:
        plane = np.pad(plane, ((0, ph), (0, pw)), mode="edge")
    return plane


def _blocks_of(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    return (
        plane.reshape(h // 8, 8, w // 8, 8)
        .transpose(0, 2, 1, 3)
        .reshape(-1, 8, 8)
    )


def _forward_blocks(plane: np.ndarray, qtable: np.ndarray) -> np.ndarray:
    blocks = _blocks_of(plane) - 128.0
    freq = np.einsum("ux,nxy,vy->nuv", _DCT, blocks, _DCT, optimize=False)
    scaled = freq / qtable.reshape(8, 8)
    quant = np.where(scaled >= 0, np.floor(scaled + 0.5), np.ceil(scaled - 0.5))
    return quant.astype(np.int64).reshape(-1, 64)


def _encode_block(
    writer: _BitWriter,
    coeffs: np.ndarray,
    pred: int,
    dc_codes: dict,
    ac_codes: dict,
) -> int:
    zz = coeffs[ZIGZAG]
    dc = int(zz[0])
    t, bits = _magnitude(dc - pred)
    code, length = dc_codes[t]
    writer.write(code, length)
    if t:
        writer.write(bits, t)
    run = 0
    last = 63
    while last > 0 and zz[last] == 0:
        last -= 1
    for k in range(1, last + 1):
        v = int(zz[k])
        if v == 0:
            run += 1
            continue
        while run > 15:
            code, length = ac_codes[0xF0]
            writer.write(code, length)
            run -= 16
        t, bits = _magnitude(v)
        code, length = ac_codes[(run << 4) | t]
        writer.write(code, length)
        writer.write(bits, t)
        run = 0
    if last < 63:
        code, length = ac_codes[0x00]
        writer.write(code, length)
    return dc


def encode(img: np.ndarray, quality: int) -> bytes:
    """Encode an (H, W, 3) uint8 RGB array as a baseline JPEG stream."""
    h, w, _ = img.shape
    if h > 65535 or w > 65535:
        raise FormatError("image too large for JPEG")
    yq, cq = _quant_tables(quality)
    y, cb, cr = _rgb_to_ycbcr(img)
    y = _pad_edge(y, 16)
    cb = _pad_edge(cb, 16)
    cr = _pad_edge(cr, 16)
    # 4:2:0: average each 2x2 chroma block
    cb = cb.reshape(cb.shape[0] // 2, 2, cb.shape[1] // 2, 2).mean(axis=(1, 3))
    cr = cr.reshape(cr.shape[0] // 2, 2, cr.shape[1] // 2, 2).mean(axis=(1, 3))

    yb = _forward_blocks(y, yq)
    cbb = _forward_blocks(cb, cq)
    crb = _forward_blocks(cr, cq)

    dc_l = _build_codes(*_DC_LUMA)
    ac_l = _build_codes(*_AC_LUMA)
    dc_c = _build_codes(*_DC_CHROMA)
    ac_c = _build_codes(*_AC_CHROMA)

    mcus_x = y.shape[1] // 16
    mcus_y = y.shape[0] // 16
    blocks_per_row = y.shape[1] // 8
    writer = _BitWriter()
    preds = [0, 0, 0]
    for my in range(mcus_y):
        for mx in range(mcus_x):
            for by, bx in ((0, 0), (0, 1), (1, 0), (1, 1)):
                idx = (2 * my + by) * blocks_per_row + 2 * mx + bx
                preds[0] = _encode_block(writer, yb[idx], preds[0], dc_l, ac_l)
            cidx = my * (cb.shape[1] // 8) + mx
            preds[1] = _encode_block(writer, cbb[cidx], preds[1], dc_c, ac_c)
            preds[2] = _encode_block(writer, crb[cidx], preds[2], dc_c, ac_c)
    scan = writer.flush()

    out = bytearray()
    out += b"\xff\xd8"  # SOI
    out += b"\xff\xe0" + struct.pack(">H", 16) + b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00"
    for tid, q in ((0, yq), (1, cq)):
        out += b"\xff\xdb" + struct.pack(">HB", 67, tid)
        out += bytes(int(q[z]) for z in ZIGZAG)
    out += b"\xff\xc0" + struct.pack(">HBHHB", 17, 8, h, w, 3)
    out += bytes([1, 0x22, 0])  # Y, 2x2 sampling, qtable 0
    out += bytes([2, 0x11, 1])
    out += bytes([3, 0x11, 1])
    for cls, dest, (counts, values) in (
        (0, 0, _DC_LUMA),
        (1, 0, _AC_LUMA),
        (0, 1, _DC_CHROMA),
        (1, 1, _AC_CHROMA),
    ):
        out += b"\xff\xc4" + struct.pack(">HB", 19 + len(values), (cls << 4) | dest)
        out += counts + values
    out += b"\xff\xda" + struct.pack(">HB", 12, 3)
    out += bytes([1, 0x00, 2, 0x11, 3, 0x11, 0, 63, 0])
    out += scan
    out += b"\xff\xd9"  # EOI
    return bytes(out)


class _BitReader:
    def __init__(self, data: bytes, pos: int):
        self.data = data
        self.pos = pos
        self.acc = 0
        self.nbits = 0

    def _fill(self) -> None:
        if self.pos >= len(self.data):
            raise CorruptFileError("unexpected end of JPEG scan data")
        byte = self.data[self.pos]
        self.pos += 1
        if byte == 0xFF:
            if self.pos < len(self.data) and self.data[self.pos] == 0x00:
                self.pos += 1
            else:
                raise CorruptFileError("marker inside JPEG scan data")
        self.acc = (self.acc << 8) | byte
        self.nbits += 8

    def read_bit(self) -> int:
        if self.nbits == 0:
            self._fill()
        self.nbits -= 1
        bit = (self.acc >> self.nbits) & 1
        self.acc &= (1 << self.nbits) - 1
        return bit

    def read_bits(self, n: int) -> int:
        v = 0
        for _ in range(n):
            v = (v << 1) | self.read_bit()
        return v


def _decode_table(counts: bytes, values: bytes) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {}
    code = 0
    pos = 0
    for length in range(1, 17):
        for _ in range(counts[length - 1]):
            table[(length, code)] = values[pos]
            pos += 1
            code += 1
        code <<= 1
    return table


def _read_symbol(reader: _BitReader, table: dict) -> int:
    code = 0
    for length in range(1, 17):
        code = (code << 1) | reader.read_bit()
        sym = table.get((length, code))
        if sym is not None:
            return sym
    raise CorruptFileError("invalid Huffman code in JPEG scan")


def _extend(v: int, t: int) -> int:
    if t == 0:
        return 0
    if v < (1 << (t - 1)):
        return v - (1 << t) + 1
    return v


def _decode_block(reader: _BitReader, dc_table: dict, ac_table: dict, pred: int):
    zz = np.zeros(64, dtype=np.int64)
    t = _read_symbol(reader, dc_table)
    diff = _extend(reader.read_bits(t), t)
    dc = pred + diff
    zz[0] = dc
    k = 1
    while k < 64:
        rs = _read_symbol(reader, ac_table)
        run, size = rs >> 4, rs & 0x0F
        if size == 0:
            if run == 15:
                k += 16
                continue
            break
        k += run
        if k > 63:
            raise CorruptFileError("AC run past end of block")
        zz[k] = _extend(reader.read_bits(size), size)
        k += 1
    coeffs = np.zeros(64, dtype=np.int64)
    coeffs[ZIGZAG] = zz
    return coeffs.reshape(8, 8), dc


def decode(data: bytes) -> np.ndarray:
    """Decode a baseline JPEG stream to an (H, W, 3) uint8 RGB array."""
    if len(data) < 4 or data[0:2] != b"\xff\xd8":
        raise FormatError("not a JPEG stream")
    pos = 2
    qtables: dict[int, np.ndarray] = {}
    htables: dict[tuple[int, int], dict] = {}
    frame = None
    scan_comps = None
    while pos < len(data):
        if data[pos] != 0xFF:
            raise CorruptFileError("expected JPEG marker")
        marker = data[pos + 1]
        pos += 2
        if marker == 0xD9:
            raise CorruptFileError("JPEG stream has no scan data")
        if marker in (0x01,) or 0xD0 <= marker <= 0xD7:
            continue
        (seglen,) = struct.unpack_from(">H", data, pos)
        seg = data[pos + 2 : pos + seglen]
        end = pos + seglen
        if marker == 0xDB:
            p = 0
            while p < len(seg):
                pq, tq = seg[p] >> 4, seg[p] & 0x0F
                if pq != 0:
                    raise FormatError("only 8-bit quantization tables supported")
                vals = np.zeros(64, dtype=np.float64)
                vals[ZIGZAG] = np.frombuffer(seg[p + 1 : p + 65], dtype=np.uint8)
                qtables[tq] = vals
                p += 65
        elif marker == 0xC4:
            p = 0
            while p < len(seg):
                cls, dest = seg[p] >> 4, seg[p] & 0x0F
                counts = seg[p + 1 : p + 17]
                n = sum(counts)
                values = seg[p + 17 : p + 17 + n]
                htables[(cls, dest)] = _decode_table(counts, values)
                p += 17 + n
        elif marker == 0xC0:
            precision, height, width, ncomp = struct.unpack_from(">BHHB", seg, 0)
            if precision != 8:
                raise FormatError("only 8-bit baseline JPEG supported")
            comps = []
            for i in range(ncomp):
                cid = seg[6 + 3 * i]
                hv = seg[7 + 3 * i]
                tq = seg[8 + 3 * i]
                comps.append({"id": cid, "h": hv >> 4, "v": hv & 0x0F, "tq": tq})
            frame = {"h": height, "w": width, "comps": comps}
        elif marker in (0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF):
            raise FormatError("only baseline sequential JPEG supported")
        elif marker == 0xDA:
            ns = seg[0]
            scan_comps = []
            for i in range(ns):
                cs = seg[1 + 2 * i]
                tables = seg[2 + 2 * i]
                scan_comps.append({"id": cs, "dc": tables >> 4, "ac": tables & 0x0F})
            pos = end
            break
        pos = end
    if frame is None or scan_comps is None:
        raise CorruptFileError("JPEG stream missing frame or scan header")

    comps = frame["comps"]
    hmax = max(c["h"] for c in comps)
    vmax = max(c["v"] for c in comps)
    if not all(c["h"] in (1, 2) and c["v"] in (1, 2) for c in comps):
        raise FormatError("unsupported sampling factors")
    mcu_w = 8 * hmax
    mcu_h = 8 * vmax
    mcus_x = -(-frame["w"] // mcu_w)
    mcus_y = -(-frame["h"] // mcu_h)

    planes = []
    for c in comps:
        pw = mcus_x * c["h"] * 8
        ph = mcus_y * c["v"] * 8
        planes.append(np.zeros((ph, pw), dtype=np.float64))

    reader = _BitReader(data, pos)
    preds = [0] * len(comps)
    by_id = {sc["id"]: sc for sc in scan_comps}
    for my in range(mcus_y):
        for mx in range(mcus_x):
            for ci, c in enumerate(comps):
                sc = by_id[c["id"]]
                dct = htables[(0, sc["dc"])]
                act = htables[(1, sc["ac"])]
                q = qtables[c["tq"]]
                for by in range(c["v"]):
                    for bx in range(c["h"]):
                        coeffs, preds[ci] = _decode_block(reader, dct, act, preds[ci])
                        freq = coeffs.astype(np.float64) * q.reshape(8, 8)
                        block = np.einsum(
                            "ux,uv,vy->xy", _DCT, freq, _DCT, optimize=False
                        )
                        py = (my * c["v"] + by) * 8
                        px = (mx * c["h"] + bx) * 8
                        planes[ci][py : py + 8, px : px + 8] = block + 128.0
    full = []
    for c, plane in zip(comps, planes):
        ry = vmax // c["v"]
        rx = hmax // c["h"]
        if ry > 1 or rx > 1:
            plane = np.repeat(np.repeat(plane, ry, axis=0), rx, axis=1)
        full.append(plane[: frame["h"], : frame["w"]])
    if len(full) == 1:
        y = full[0]
        gray = np.clip(np.round(y), 0, 255).astype(np.uint8)
        return np.stack([gray, gray, gray], axis=-1)
    if len(full) != 3:
        raise FormatError("unsupported component count")
    return _ycbcr_to_rgb(full[0], full[1], full[2])
