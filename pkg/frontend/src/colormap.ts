/** Color scales mapping normalized values in [0, 1] to RGB. */

import { PlotError } from "./errors";

export type Rgb = readonly [number, number, number];

interface Stop {
  at: number;
  color: Rgb;
}

/** Classic rainbow table: dark blue at the minimum through cyan,
 * green, yellow and orange to pure red at the maximum. */
const RAINBOW: Stop[] = [
  { at: 0.0, color: [24, 0, 96] },
  { at: 0.16, color: [0, 40, 255] },
  { at: 0.36, color: [0, 200, 255] },
  { at: 0.52, color: [0, 216, 64] },
  { at: 0.68, color: [255, 232, 0] },
  { at: 0.84, color: [255, 128, 0] },
  { at: 1.0, color: [255, 0, 0] },
];

const GRAY: Stop[] = [
  { at: 0.0, color: [0, 0, 0] },
  { at: 1.0, color: [255, 255, 255] },
];

const TABLES: Record<string, Stop[]> = { rainbow: RAINBOW, gray: GRAY };

export const COLORMAP_NAMES = Object.keys(TABLES);

export function colormap(name: string, t: number): Rgb {
  const stops = TABLES[name];
  if (!stops) {
    throw new PlotError(
      `unknown colormap "${name}" (choose from ${COLORMAP_NAMES.join(", ")})`);
  }
  const x = Math.min(1, Math.max(0, t));
  for (let s = 1; s < stops.length; s++) {
    const hi = stops[s]!;
    if (x <= hi.at) {
      const lo = stops[s - 1]!;
      const lam = (x - lo.at) / (hi.at - lo.at);
      return [
        Math.round(lo.color[0] + lam * (hi.color[0] - lo.color[0])),
        Math.round(lo.color[1] + lam * (hi.color[1] - lo.color[1])),
        Math.round(lo.color[2] + lam * (hi.color[2] - lo.color[2])),
      ];
    }
  }
  return stops[stops.length - 1]!.color;
}

/** Normalize a value onto [0, 1]; a zero-width range maps everything
 * to the middle of the scale, so a constant field is one flat color. */
export function normalize(value: number, vmin: number, vmax: number): number {
  if (!(vmax > vmin)) {
    return 0.5;
  }
  return (value - vmin) / (vmax - vmin);
}
