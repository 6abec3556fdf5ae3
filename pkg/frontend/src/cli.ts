/** Invocation of the oodbench command line tool. */

import { execFile, execFileSync } from "node:child_process";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

export interface CliOptions {
  /** Command vector, e.g. ["oodbench"] or ["python3", "-m", "oodbench.cli"].
   * Defaults to $OODBENCH_CLI (whitespace split) or ["oodbench"]. */
  command?: string[];
}

/** Raised when the tool exits non-zero; message carries its error line. */
export class CliError extends Error {
  readonly category: string;
  readonly exitCode: number;

  constructor(category: string, message: string, exitCode: number) {
    super(message);
    this.name = "CliError";
    this.category = category;
    this.exitCode = exitCode;
  }
}

export function resolveCommand(options?: CliOptions): string[] {
  if (options?.command && options.command.length > 0) return options.command;
  const env = process.env.OODBENCH_CLI;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return ["oodbench"];
}

function toCliError(err: unknown): never {
  const anyErr = err as { status?: number; stderr?: string | Buffer; message?: string };
  const stderr = (anyErr.stderr ?? "").toString();
  const line = stderr
    .split("\n")
    .find((l) => l.startsWith("error:"));
  if (line) {
    const category = line.split(":", 3)[1] ?? "unknown";
    throw new CliError(category, line.trim(), anyErr.status ?? -1);
  }
  throw new CliError("unknown", anyErr.message ?? "command failed", anyErr.status ?? -1);
}

export function runCli(args: string[], options?: CliOptions): string {
  const [cmd, ...prefix] = resolveCommand(options);
  try {
    return execFileSync(cmd, [...prefix, ...args], {
      encoding: "utf8",
      stdio: ["ignore", "pipe", "pipe"],
      maxBuffer: 64 * 1024 * 1024,
    });
  } catch (err) {
    toCliError(err);
  }
}

export async function runCliAsync(args: string[], options?: CliOptions): Promise<string> {
  const [cmd, ...prefix] = resolveCommand(options);
  try {
    const { stdout } = await execFileAsync(cmd, [...prefix, ...args], {
      encoding: "utf8",
      maxBuffer: 64 * 1024 * 1024,
    });
    return stdout;
  } catch (err) {
    toCliError(err);
  }
}
