/** FNV-1a 64, matching the hash the corruption pipeline uses for
 * per-task seeds and manifest digests. */

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
export const MASK64 = (1n << 64n) - 1n;

export function fnv1a64(data: Uint8Array): bigint {
  let h = FNV_OFFSET;
  for (const byte of data) {
    h ^= BigInt(byte);
    h = (h * FNV_PRIME) & MASK64;
  }
  return h;
}

export function fnv1a64Hex(data: Uint8Array): string {
  return fnv1a64(data).toString(16).padStart(16, "0");
}

/** Per-task seed used by the CLI pipeline:
 * fnv1a64("<relative_path>|<kind>|<level>") XOR master seed. */
export function deriveSeed(
  masterSeed: bigint,
  relativePath: string,
  kind: string,
  level: number,
): bigint {
  const key = new TextEncoder().encode(`${relativePath}|${kind}|${level}`);
  return (fnv1a64(key) ^ masterSeed) & MASK64;
}
