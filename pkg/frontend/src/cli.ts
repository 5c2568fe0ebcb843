#!/usr/bin/env node
/** Command line: plots --in <run dir> --out <dir> [--format png|svg]
 * [--colormap rainbow|gray]. */

import { PlotError } from "./errors";
import { FORMATS, ImageFormat, PlotJob, runJob } from "./run";

const USAGE =
  "usage: plots --in <run-dir> --out <dir> [--format png|svg] " +
  "[--colormap rainbow|gray]";

export function parseArgs(argv: string[]): PlotJob {
  let inputDir: string | undefined;
  let outputDir: string | undefined;
  let format = "png";
  let colormapName = "rainbow";

  for (let k = 0; k < argv.length; k++) {
    const flag = argv[k]!;
    const take = (): string => {
      const value = argv[++k];
      if (value === undefined) {
        throw new UsageError(`${flag} needs a value`);
      }
      return value;
    };
    if (flag === "--in") {
      inputDir = take();
    } else if (flag === "--out") {
      outputDir = take();
    } else if (flag === "--format") {
      format = take();
    } else if (flag === "--colormap") {
      colormapName = take();
    } else if (flag === "--help" || flag === "-h") {
      throw new UsageError("", 0);
    } else {
      throw new UsageError(`unknown argument "${flag}"`);
    }
  }
  if (!inputDir || !outputDir) {
    throw new UsageError("--in and --out are required");
  }
  if (!(FORMATS as readonly string[]).includes(format)) {
    throw new UsageError(
      `--format must be one of ${FORMATS.join(", ")}, got "${format}"`);
  }
  return { inputDir, outputDir, format: format as ImageFormat, colormapName };
}

class UsageError extends Error {
  readonly exitCode: number;
  constructor(message: string, exitCode = 2) {
    super(message);
    this.exitCode = exitCode;
  }
}

export function main(argv: string[]): number {
  let job: PlotJob;
  try {
    job = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      const stream = err.exitCode === 0 ? process.stdout : process.stderr;
      if (err.message) {
        stream.write(`plots: ${err.message}\n`);
      }
      stream.write(USAGE + "\n");
      return err.exitCode;
    }
    throw err;
  }
  try {
    const written = runJob(job);
    for (const target of written) {
      process.stdout.write(target + "\n");
    }
    return 0;
  } catch (err) {
    if (err instanceof PlotError) {
      process.stderr.write(`plots: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
