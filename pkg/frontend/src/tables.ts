/** Readers for the run-directory CSV tables.
 *
 * The tables are plain comma-separated text with a mandatory header
 * row and never contain quoted cells; every check failure reports the
 * file and the offending column by name.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { PlotError } from "./errors";

export interface Table {
  /** Basename used in error messages. */
  name: string;
  header: string[];
  rows: string[][];
}

export interface ControlCurve {
  t: number[];
  u: number[];
}

export interface DensitySnapshot {
  /** Time tag taken from the filename, e.g. "3" of density_t3.csv. */
  tag: string;
  /** Snapshot time parsed from the tag. */
  time: number;
  /** Phase nodes, length nTheta. */
  theta: number[];
  /** Drive nodes, length nEta, strictly increasing. */
  eta: number[];
  /** Row-major values: rho[j * nTheta + m] at (eta[j], theta[m]). */
  rho: Float64Array;
}

export function readTable(filePath: string): Table {
  const name = path.basename(filePath);
  let text: string;
  try {
    text = fs.readFileSync(filePath, "utf8");
  } catch (err) {
    throw new PlotError(`${name}: cannot read ${filePath}: ${(err as Error).message}`);
  }
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new PlotError(`${name}: file is empty`);
  }
  const split = (line: string) => line.split(",").map((cell) => cell.trim());
  const header = split(lines[0]!);
  const rows = lines.slice(1).map(split);
  return { name, header, rows };
}

/** Map wanted column names to indices; missing names are an error. */
export function columnIndices(table: Table, wanted: string[]): number[] {
  return wanted.map((col) => {
    const idx = table.header.indexOf(col);
    if (idx < 0) {
      throw new PlotError(
        `${table.name}: missing column "${col}" in header ` +
        `"${table.header.join(",")}"`);
    }
    return idx;
  });
}

function numericColumn(table: Table, index: number, colName: string): number[] {
  return table.rows.map((row, r) => {
    const cell = row[index];
    if (cell === undefined) {
      throw new PlotError(
        `${table.name}: row ${r + 2} has ${row.length} cells, ` +
        `column "${colName}" is missing`);
    }
    const value = Number(cell);
    if (cell === "" || !Number.isFinite(value)) {
      throw new PlotError(
        `${table.name}: non-numeric value "${cell}" in column ` +
        `"${colName}", row ${r + 2}`);
    }
    return value;
  });
}

export function loadControl(filePath: string): ControlCurve {
  const table = readTable(filePath);
  const [ti, ui] = columnIndices(table, ["t", "u"]);
  const t = numericColumn(table, ti!, "t");
  const u = numericColumn(table, ui!, "u");
  if (t.length < 2) {
    throw new PlotError(`${table.name}: need at least 2 samples, got ${t.length}`);
  }
  for (let k = 1; k < t.length; k++) {
    if (!(t[k]! > t[k - 1]!)) {
      throw new PlotError(
        `${table.name}: column "t" must be strictly increasing ` +
        `(row ${k + 2})`);
    }
  }
  return { t, u };
}

export function loadDensity(filePath: string, tag: string): DensitySnapshot {
  const table = readTable(filePath);
  const [hi, ei, ri] = columnIndices(table, ["theta", "eta", "rho"]);
  const theta = numericColumn(table, hi!, "theta");
  const eta = numericColumn(table, ei!, "eta");
  const rho = numericColumn(table, ri!, "rho");
  const total = rho.length;
  if (total === 0) {
    throw new PlotError(`${table.name}: no data rows`);
  }

  // Rows come eta-block by eta-block; the first block ends where the
  // eta value changes.
  let nTheta = total;
  for (let k = 1; k < total; k++) {
    if (eta[k] !== eta[0]) {
      nTheta = k;
      break;
    }
  }
  if (total % nTheta !== 0) {
    throw new PlotError(
      `${table.name}: ${total} rows do not form a rectangular grid ` +
      `of ${nTheta} theta nodes`);
  }
  const nEta = total / nTheta;
  const etaNodes: number[] = [];
  for (let j = 0; j < nEta; j++) {
    const base = j * nTheta;
    const etaHere = eta[base]!;
    for (let m = 0; m < nTheta; m++) {
      if (eta[base + m] !== etaHere) {
        throw new PlotError(
          `${table.name}: column "eta" is not constant within block ` +
          `${j} (row ${base + m + 2})`);
      }
      if (theta[base + m] !== theta[m]) {
        throw new PlotError(
          `${table.name}: column "theta" does not repeat the node ` +
          `layout of the first block (row ${base + m + 2})`);
      }
    }
    if (j > 0 && !(etaHere > etaNodes[j - 1]!)) {
      throw new PlotError(
        `${table.name}: column "eta" must increase between blocks ` +
        `(block ${j})`);
    }
    etaNodes.push(etaHere);
  }
  return {
    tag,
    time: Number(tag),
    theta: theta.slice(0, nTheta),
    eta: etaNodes,
    rho: Float64Array.from(rho),
  };
}

export interface RunInputs {
  controlPath: string;
  /** density_t*.csv paths with their tags, sorted by snapshot time. */
  densities: { filePath: string; tag: string }[];
}

const DENSITY_PATTERN = /^density_t(.+)\.csv$/;

export function discoverRun(inputDir: string): RunInputs {
  let entries: string[];
  try {
    entries = fs.readdirSync(inputDir);
  } catch (err) {
    throw new PlotError(
      `cannot read input directory ${inputDir}: ${(err as Error).message}`);
  }
  const controlPath = path.join(inputDir, "control.csv");
  if (!entries.includes("control.csv")) {
    throw new PlotError(`control.csv: not found in ${inputDir}`);
  }
  const densities = entries
    .map((entry) => {
      const match = DENSITY_PATTERN.exec(entry);
      return match ? { filePath: path.join(inputDir, entry), tag: match[1]! } : null;
    })
    .filter((hit): hit is { filePath: string; tag: string } => hit !== null);
  for (const { filePath, tag } of densities) {
    if (!Number.isFinite(Number(tag))) {
      throw new PlotError(
        `${path.basename(filePath)}: time tag "${tag}" is not a number`);
    }
  }
  if (densities.length === 0) {
    throw new PlotError(`no density_t*.csv snapshots found in ${inputDir}`);
  }
  densities.sort((a, b) => Number(a.tag) - Number(b.tag));
  return { controlPath, densities };
}
