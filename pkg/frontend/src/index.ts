/** In-memory image corruption backed by the oodbench CLI.
 *
 * corrupt() feeds an RGB buffer through one (kind, level, seed) cell
 * of the corruption engine and returns the corrupted buffer.  Output
 * bytes are identical to the engine's in-process API for the same
 * arguments: the per-task seed the pipeline derives is inverted here
 * (master = fnv1a64("img.png|kind|level") XOR seed), so the engine
 * sees exactly the requested seed.
 */

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { CliOptions, runCli, runCliAsync } from "./cli.js";
import { MASK64, fnv1a64 } from "./fnv.js";
import { RawImage, decodePng, encodePng } from "./png.js";

export { CliError, CliOptions } from "./cli.js";
export { deriveSeed, fnv1a64, fnv1a64Hex } from "./fnv.js";
export { RawImage, decodePng, encodePng } from "./png.js";

export interface KindInfo {
  name: string;
  category: string;
}

const TAXONOMY: ReadonlyArray<readonly [string, readonly string[]]> = [
  ["lighting_weather", ["brightness", "contrast", "saturate", "fog", "snow"]],
  ["sensor", ["defocus_blur", "color_shift", "pixelate"]],
  ["movement", ["motion_blur", "zoom_blur", "facial_distortion"]],
  [
    "data_processing",
    [
      "gaussian_noise",
      "impulse_noise",
      "shot_noise",
      "speckle_noise",
      "salt_pepper_noise",
      "jpeg_compression",
    ],
  ],
  ["occlusion", ["random_occlusion", "frost", "spatter"]],
];

/** The 20 corruption kinds with their categories, canonical order. */
export function listKinds(): KindInfo[] {
  const out: KindInfo[] = [];
  for (const [category, names] of TAXONOMY) {
    for (const name of names) out.push({ name, category });
  }
  return out;
}

export type SeverityParams = Record<string, unknown>;

/** Hyperparameters for one kind (all levels) or one (kind, level) row.
 * Pass "all" to fetch the complete 100-row table. */
export function severityParams(
  kind: string,
  level?: number,
  options?: CliOptions,
): SeverityParams | SeverityParams[] {
  const args = ["params", "--kind", kind];
  if (level !== undefined) args.push("--level", String(level));
  return JSON.parse(runCli(args, options));
}

function toSeed(seed: number | bigint): bigint {
  if (typeof seed === "number") {
    if (!Number.isSafeInteger(seed) || seed < 0) {
      throw new Error("seed must be a non-negative safe integer or a bigint");
    }
    return BigInt(seed);
  }
  if (seed < 0n) throw new Error("seed must be non-negative");
  return seed & MASK64;
}

function validateImage(image: RawImage): void {
  if (image.width < 1 || image.height < 1) {
    throw new Error("image must be at least 1x1");
  }
  if (image.data.length !== image.width * image.height * 3) {
    throw new Error(
      `pixel buffer length ${image.data.length} does not match ${image.width}x${image.height}x3`,
    );
  }
}

const INPUT_NAME = "img.png";

function masterFor(kind: string, level: number, seed: bigint): bigint {
  const key = new TextEncoder().encode(`${INPUT_NAME}|${kind}|${level}`);
  return (fnv1a64(key) ^ seed) & MASK64;
}

interface Workspace {
  root: string;
  args: string[];
  outputFile: string;
}

function prepare(image: RawImage, kind: string, level: number, seed: bigint): Workspace {
  const root = fs.mkdtempSync(path.join(os.tmpdir(), "oodbench-"));
  const inDir = path.join(root, "in");
  const outDir = path.join(root, "out");
  fs.mkdirSync(inDir);
  fs.writeFileSync(path.join(inDir, INPUT_NAME), encodePng(image));
  const args = [
    "corrupt",
    "--input", inDir,
    "--output", outDir,
    "--kinds", kind,
    "--levels", String(level),
    "--seed", masterFor(kind, level, seed).toString(),
  ];
  return { root, args, outputFile: path.join(outDir, kind, String(level), INPUT_NAME) };
}

/** Apply one corruption to an in-memory image; returns a new buffer. */
export function corrupt(
  image: RawImage,
  kind: string,
  level: number,
  seed: number | bigint,
  options?: CliOptions,
): RawImage {
  validateImage(image);
  const ws = prepare(image, kind, level, toSeed(seed));
  try {
    runCli(ws.args, options);
    return decodePng(fs.readFileSync(ws.outputFile));
  } finally {
    fs.rmSync(ws.root, { recursive: true, force: true });
  }
}

export async function corruptAsync(
  image: RawImage,
  kind: string,
  level: number,
  seed: number | bigint,
  options?: CliOptions,
): Promise<RawImage> {
  validateImage(image);
  const ws = prepare(image, kind, level, toSeed(seed));
  try {
    await runCliAsync(ws.args, options);
    return decodePng(fs.readFileSync(ws.outputFile));
  } finally {
    fs.rmSync(ws.root, { recursive: true, force: true });
  }
}
