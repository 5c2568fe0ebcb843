/** Scene builders for the two figure kinds: the control curve and the
 * density heatmaps.  Everything is computed in integer-friendly pixel
 * coordinates so both backends draw the same picture. */

import { Rgb, colormap, normalize } from "./colormap";
import { ControlCurve, DensitySnapshot } from "./tables";
import { Primitive, Scene } from "./scene";

const WHITE: Rgb = [255, 255, 255];
const INK: Rgb = [40, 40, 40];
const FRAME: Rgb = [96, 96, 96];
const GRID: Rgb = [208, 208, 208];
const CURVE: Rgb = [0, 90, 200];

export interface AxisSpan {
  lo: number;
  hi: number;
}

/** Round tick positions covering [lo, hi] with steps of 1/2/5 form. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  const span = hi - lo;
  if (!(span > 0)) {
    return [lo];
  }
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * mag;
  for (const mult of [1, 2, 5]) {
    if (mult * mag >= raw) {
      step = mult * mag;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step - 1e-9) * step;
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function fmtTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const text = Number(value.toPrecision(6)).toString();
  return text === "-0" ? "0" : text;
}

function padSpan(lo: number, hi: number): AxisSpan {
  if (hi > lo) {
    const pad = 0.05 * (hi - lo);
    return { lo: lo - pad, hi: hi + pad };
  }
  // A flat curve still needs a visible vertical extent.
  const pad = Math.max(1.0, Math.abs(lo) * 0.1);
  return { lo: lo - pad, hi: hi + pad };
}

interface Frame {
  left: number;
  top: number;
  width: number;
  height: number;
}

function frameBox(frame: Frame): Primitive[] {
  const { left, top, width, height } = frame;
  return [
    { kind: "rect", x: left, y: top, w: width, h: 1, fill: FRAME },
    { kind: "rect", x: left, y: top + height - 1, w: width, h: 1, fill: FRAME },
    { kind: "rect", x: left, y: top, w: 1, h: height, fill: FRAME },
    { kind: "rect", x: left + width - 1, y: top, w: 1, h: height, fill: FRAME },
  ];
}

export const CONTROL_WIDTH = 720;
export const CONTROL_HEIGHT = 420;
const CONTROL_FRAME: Frame = { left: 64, top: 24, width: 636, height: 344 };

export function buildControlScene(curve: ControlCurve): Scene {
  const frame = CONTROL_FRAME;
  const prims: Primitive[] = [];
  const xSpan: AxisSpan = { lo: curve.t[0]!, hi: curve.t[curve.t.length - 1]! };
  const ySpan = padSpan(Math.min(...curve.u), Math.max(...curve.u));

  const xPix = (t: number) =>
    frame.left + ((t - xSpan.lo) / (xSpan.hi - xSpan.lo)) * (frame.width - 1);
  const yPix = (u: number) =>
    frame.top + frame.height - 1
    - ((u - ySpan.lo) / (ySpan.hi - ySpan.lo)) * (frame.height - 1);

  // Tick marks and labels.
  for (const tick of niceTicks(xSpan.lo, xSpan.hi)) {
    const x = Math.round(xPix(tick));
    prims.push({ kind: "rect", x, y: frame.top + frame.height, w: 1, h: 4,
                 fill: FRAME });
    prims.push({ kind: "text", x, y: frame.top + frame.height + 8,
                 text: fmtTick(tick), scale: 1, anchor: "middle", fill: INK });
  }
  for (const tick of niceTicks(ySpan.lo, ySpan.hi)) {
    const y = Math.round(yPix(tick));
    prims.push({ kind: "rect", x: frame.left - 4, y, w: 4, h: 1, fill: FRAME });
    prims.push({ kind: "text", x: frame.left - 7, y: y - 3,
                 text: fmtTick(tick), scale: 1, anchor: "end", fill: INK });
  }
  // Zero level, drawn under the curve when it is in range.
  if (ySpan.lo < 0 && ySpan.hi > 0) {
    prims.push({ kind: "rect", x: frame.left, y: Math.round(yPix(0)),
                 w: frame.width, h: 1, fill: GRID });
  }
  prims.push(...frameBox(frame));

  const points: number[] = [];
  for (let k = 0; k < curve.t.length; k++) {
    points.push(xPix(curve.t[k]!), yPix(curve.u[k]!));
  }
  prims.push({ kind: "polyline", points, stroke: CURVE });

  // Axis names.
  prims.push({ kind: "text", x: frame.left + frame.width / 2,
               y: CONTROL_HEIGHT - 18, text: "t", scale: 2,
               anchor: "middle", fill: INK });
  prims.push({ kind: "text", x: 14, y: frame.top + frame.height / 2 - 7,
               text: "u", scale: 2, anchor: "start", fill: INK });

  return { width: CONTROL_WIDTH, height: CONTROL_HEIGHT, background: WHITE,
           prims };
}

const DENSITY_MARGIN = { left: 64, right: 88, top: 34, bottom: 52 };
const COLORBAR_WIDTH = 16;
const COLORBAR_GAP = 14;
const TWO_PI = 2.0 * Math.PI;

export interface DensitySceneOptions {
  vmin: number;
  vmax: number;
  colormapName: string;
}

function cellSize(count: number, budget: number): number {
  return Math.max(2, Math.min(16, Math.floor(budget / count)));
}

export function buildDensityScene(snap: DensitySnapshot,
                                  opts: DensitySceneOptions): Scene {
  const nTheta = snap.theta.length;
  const nEta = snap.eta.length;
  const cw = cellSize(nTheta, 560);
  const ch = cellSize(nEta, 360);
  const plotW = cw * nTheta;
  const plotH = ch * nEta;
  const frame: Frame = { left: DENSITY_MARGIN.left, top: DENSITY_MARGIN.top,
                         width: plotW, height: plotH };
  const width = DENSITY_MARGIN.left + plotW + DENSITY_MARGIN.right;
  const height = DENSITY_MARGIN.top + plotH + DENSITY_MARGIN.bottom;
  const prims: Primitive[] = [];

  // Heatmap cells; eta runs upward, so block j sits ch * (nEta - 1 - j)
  // below the frame top.
  for (let j = 0; j < nEta; j++) {
    const y = frame.top + ch * (nEta - 1 - j);
    for (let m = 0; m < nTheta; m++) {
      const value = snap.rho[j * nTheta + m]!;
      const fill = colormap(opts.colormapName,
                            normalize(value, opts.vmin, opts.vmax));
      prims.push({ kind: "rect", x: frame.left + cw * m, y, w: cw, h: ch,
                   fill });
    }
  }

  // theta axis: the cells cover [0, 2*pi).
  for (const tick of niceTicks(0, TWO_PI)) {
    if (tick >= TWO_PI) {
      continue;
    }
    const x = Math.round(frame.left + (tick / TWO_PI) * plotW);
    prims.push({ kind: "rect", x, y: frame.top + plotH, w: 1, h: 4,
                 fill: FRAME });
    prims.push({ kind: "text", x, y: frame.top + plotH + 8,
                 text: fmtTick(tick), scale: 1, anchor: "middle", fill: INK });
  }
  // eta axis: node-centered rows.
  const etaLo = snap.eta[0]!;
  const etaHi = snap.eta[nEta - 1]!;
  const yOfEta = (value: number) => {
    if (!(etaHi > etaLo)) {
      return frame.top + plotH / 2;
    }
    const frac = (value - etaLo) / (etaHi - etaLo);
    return frame.top + plotH - ch / 2 - frac * (plotH - ch);
  };
  for (const tick of niceTicks(etaLo, etaHi, 4)) {
    if (tick < etaLo - 1e-9 || tick > etaHi + 1e-9) {
      continue;
    }
    const y = Math.round(yOfEta(tick));
    prims.push({ kind: "rect", x: frame.left - 4, y, w: 4, h: 1, fill: FRAME });
    prims.push({ kind: "text", x: frame.left - 7, y: y - 3,
                 text: fmtTick(tick), scale: 1, anchor: "end", fill: INK });
  }
  prims.push(...frameBox(frame));

  // Shared-scale colorbar, vmin at the bottom.
  const barLeft = frame.left + plotW + COLORBAR_GAP;
  for (let py = 0; py < plotH; py++) {
    const frac = plotH === 1 ? 0.5 : 1 - py / (plotH - 1);
    prims.push({ kind: "rect", x: barLeft, y: frame.top + py,
                 w: COLORBAR_WIDTH, h: 1,
                 fill: colormap(opts.colormapName,
                                opts.vmax > opts.vmin ? frac : 0.5) });
  }
  prims.push(...frameBox({ left: barLeft, top: frame.top,
                           width: COLORBAR_WIDTH, height: plotH }));
  prims.push({ kind: "text", x: barLeft + COLORBAR_WIDTH + 4, y: frame.top - 3,
               text: fmtTick(opts.vmax), scale: 1, anchor: "start",
               fill: INK });
  prims.push({ kind: "text", x: barLeft + COLORBAR_WIDTH + 4,
               y: frame.top + plotH - 4, text: fmtTick(opts.vmin), scale: 1,
               anchor: "start", fill: INK });
  prims.push({ kind: "text", x: barLeft + COLORBAR_WIDTH / 2, y: frame.top - 16,
               text: "rho", scale: 1, anchor: "middle", fill: INK });

  // Title and axis names.
  prims.push({ kind: "text", x: frame.left + plotW / 2, y: 8,
               text: `t = ${snap.tag}`, scale: 2, anchor: "middle",
               fill: INK });
  prims.push({ kind: "text", x: frame.left + plotW / 2, y: height - 18,
               text: "theta", scale: 2, anchor: "middle", fill: INK });
  prims.push({ kind: "text", x: 8, y: frame.top + plotH / 2 - 7,
               text: "eta", scale: 2, anchor: "start", fill: INK });

  return { width, height, background: WHITE, prims };
}
