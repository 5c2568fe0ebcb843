/** The plot job: read a run directory, render every figure, write the
 * images.  The input directory is only ever read. */

import * as fs from "node:fs";
import * as path from "node:path";

import { PlotError } from "./errors";
import { COLORMAP_NAMES } from "./colormap";
import { buildControlScene, buildDensityScene } from "./figures";
import { renderPng } from "./render_png";
import { renderSvg } from "./render_svg";
import { Scene } from "./scene";
import { DensitySnapshot, discoverRun, loadControl, loadDensity } from "./tables";

export const FORMATS = ["png", "svg"] as const;
export type ImageFormat = (typeof FORMATS)[number];

export interface PlotJob {
  inputDir: string;
  outputDir: string;
  format: ImageFormat;
  colormapName: string;
}

export function defaultJob(inputDir: string, outputDir: string): PlotJob {
  return { inputDir, outputDir, format: "png", colormapName: "rainbow" };
}

function encode(scene: Scene, format: ImageFormat): Buffer {
  return format === "png"
    ? renderPng(scene)
    : Buffer.from(renderSvg(scene), "utf8");
}

/** Global value range so every snapshot shares one color scale. */
export function sharedRange(snaps: DensitySnapshot[]): { vmin: number; vmax: number } {
  let vmin = Infinity;
  let vmax = -Infinity;
  for (const snap of snaps) {
    for (const value of snap.rho) {
      if (value < vmin) {
        vmin = value;
      }
      if (value > vmax) {
        vmax = value;
      }
    }
  }
  return { vmin, vmax };
}

export function runJob(job: PlotJob): string[] {
  if (!(FORMATS as readonly string[]).includes(job.format)) {
    throw new PlotError(
      `unknown format "${job.format}" (choose from ${FORMATS.join(", ")})`);
  }
  if (!COLORMAP_NAMES.includes(job.colormapName)) {
    throw new PlotError(
      `unknown colormap "${job.colormapName}" ` +
      `(choose from ${COLORMAP_NAMES.join(", ")})`);
  }
  const inputReal = path.resolve(job.inputDir);
  const outputReal = path.resolve(job.outputDir);
  if (inputReal === outputReal) {
    throw new PlotError(
      "output directory must differ from the input run directory");
  }

  const inputs = discoverRun(job.inputDir);
  const control = loadControl(inputs.controlPath);
  const snaps = inputs.densities.map(({ filePath, tag }) =>
    loadDensity(filePath, tag));
  const { vmin, vmax } = sharedRange(snaps);

  fs.mkdirSync(job.outputDir, { recursive: true });
  const written: string[] = [];
  const write = (basename: string, scene: Scene) => {
    const target = path.join(job.outputDir, `${basename}.${job.format}`);
    fs.writeFileSync(target, encode(scene, job.format));
    written.push(target);
  };

  write("control", buildControlScene(control));
  for (const snap of snaps) {
    write(`density_t${snap.tag}`,
          buildDensityScene(snap, { vmin, vmax,
                                    colormapName: job.colormapName }));
  }
  return written;
}
