/** PNG encode/decode for 8-bit images.
 *
 * Encoding is fixed to non-interlaced RGB with filter type 0 and zlib
 * level 6, mirroring the Python side's writer. Decoding handles
 * non-interlaced 8-bit grayscale, RGB and RGBA with any standard row
 * filter, which covers every file the CLI produces.
 */

import * as zlib from "node:zlib";

export interface RawImage {
  width: number;
  height: number;
  /** Row-major RGB samples, length width * height * 3. */
  data: Uint8Array;
}

const SIGNATURE = Uint8Array.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(...parts: Uint8Array[]): number {
  let c = 0xffffffff;
  for (const part of parts) {
    for (const byte of part) {
      c = CRC_TABLE[(c ^ byte) & 0xff] ^ (c >>> 8);
    }
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(tag: string, payload: Uint8Array): Uint8Array {
  const out = new Uint8Array(12 + payload.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, payload.length);
  out.set(new TextEncoder().encode(tag), 4);
  out.set(payload, 8);
  view.setUint32(8 + payload.length, crc32(out.subarray(4, 8 + payload.length)));
  return out;
}

export function encodePng(image: RawImage): Uint8Array {
  const { width, height, data } = image;
  if (data.length !== width * height * 3) {
    throw new Error(`pixel buffer length ${data.length} does not match ${width}x${height}x3`);
  }
  const stride = width * 3;
  const raw = new Uint8Array(height * (stride + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const ihdr = new Uint8Array(13);
  const ihdrView = new DataView(ihdr.buffer);
  ihdrView.setUint32(0, width);
  ihdrView.setUint32(4, height);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type: RGB
  const idat = new Uint8Array(zlib.deflateSync(raw, { level: 6 }));
  const parts = [SIGNATURE, chunk("IHDR", ihdr), chunk("IDAT", idat), chunk("IEND", new Uint8Array(0))];
  const total = parts.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let pos = 0;
  for (const part of parts) {
    out.set(part, pos);
    pos += part.length;
  }
  return out;
}

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

export function decodePng(bytes: Uint8Array): RawImage {
  for (let i = 0; i < SIGNATURE.length; i++) {
    if (bytes[i] !== SIGNATURE[i]) throw new Error("not a PNG stream");
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  let pos = SIGNATURE.length;
  let width = 0;
  let height = 0;
  let colorType = -1;
  const idatParts: Uint8Array[] = [];
  while (pos < bytes.length) {
    const length = view.getUint32(pos);
    const tag = new TextDecoder().decode(bytes.subarray(pos + 4, pos + 8));
    const payload = bytes.subarray(pos + 8, pos + 8 + length);
    pos += 12 + length;
    if (tag === "IHDR") {
      const v = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
      width = v.getUint32(0);
      height = v.getUint32(4);
      const bitDepth = payload[8];
      colorType = payload[9];
      if (bitDepth !== 8) throw new Error("only 8-bit PNG supported");
      if (payload[12] !== 0) throw new Error("interlaced PNG not supported");
      if (![0, 2, 6].includes(colorType)) throw new Error(`unsupported color type ${colorType}`);
    } else if (tag === "IDAT") {
      idatParts.push(payload);
    } else if (tag === "IEND") {
      break;
    }
  }
  if (!width || idatParts.length === 0) throw new Error("PNG missing IHDR or IDAT");
  const channels = colorType === 0 ? 1 : colorType === 2 ? 3 : 4;
  const idat = new Uint8Array(idatParts.reduce((n, p) => n + p.length, 0));
  let off = 0;
  for (const part of idatParts) {
    idat.set(part, off);
    off += part.length;
  }
  const raw = new Uint8Array(zlib.inflateSync(idat));
  const stride = width * channels;
  if (raw.length !== height * (stride + 1)) throw new Error("PNG pixel data has wrong length");

  const lines = new Uint8Array(height * stride);
  let prevStart = -1;
  for (let y = 0; y < height; y++) {
    const fpos = y * (stride + 1);
    const filter = raw[fpos];
    const lineStart = y * stride;
    for (let x = 0; x < stride; x++) {
      const rawByte = raw[fpos + 1 + x];
      const left = x >= channels ? lines[lineStart + x - channels] : 0;
      const up = prevStart >= 0 ? lines[prevStart + x] : 0;
      const upLeft = prevStart >= 0 && x >= channels ? lines[prevStart + x - channels] : 0;
      let value: number;
      switch (filter) {
        case 0:
          value = rawByte;
          break;
        case 1:
          value = rawByte + left;
          break;
        case 2:
          value = rawByte + up;
          break;
        case 3:
          value = rawByte + ((left + up) >> 1);
          break;
        case 4:
          value = rawByte + paeth(left, up, upLeft);
          break;
        default:
          throw new Error(`unknown PNG filter type ${filter}`);
      }
      lines[lineStart + x] = value & 0xff;
    }
    prevStart = lineStart;
  }

  if (channels === 3) {
    return { width, height, data: lines };
  }
  const rgb = new Uint8Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    if (channels === 1) {
      rgb[i * 3] = rgb[i * 3 + 1] = rgb[i * 3 + 2] = lines[i];
    } else {
      rgb[i * 3] = lines[i * 4];
      rgb[i * 3 + 1] = lines[i * 4 + 1];
      rgb[i * 3 + 2] = lines[i * 4 + 2];
    }
  }
  return { width, height, data: rgb };
}
