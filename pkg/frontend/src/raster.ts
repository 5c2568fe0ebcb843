/** Scene rasterizer: RGB pixel buffer, Bresenham lines, and a small
 * built-in 5x7 bitmap font (just the characters the figures use). */

import { Rgb } from "./colormap";
import { GLYPH_ADVANCE, GLYPH_H, GLYPH_W, Primitive, Scene, TextPrim,
         anchoredLeft } from "./scene";

export class Raster {
  readonly width: number;
  readonly height: number;
  /** Row-major RGB, 3 bytes per pixel. */
  readonly pixels: Uint8Array;

  constructor(width: number, height: number, background: Rgb) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(3 * width * height);
    for (let p = 0; p < width * height; p++) {
      this.pixels[3 * p] = background[0];
      this.pixels[3 * p + 1] = background[1];
      this.pixels[3 * p + 2] = background[2];
    }
  }

  set(x: number, y: number, rgb: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return;
    }
    const p = 3 * (y * this.width + x);
    this.pixels[p] = rgb[0];
    this.pixels[p + 1] = rgb[1];
    this.pixels[p + 2] = rgb[2];
  }

  get(x: number, y: number): Rgb {
    const p = 3 * (y * this.width + x);
    return [this.pixels[p]!, this.pixels[p + 1]!, this.pixels[p + 2]!];
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: Rgb): void {
    const x1 = Math.max(0, Math.round(x));
    const y1 = Math.max(0, Math.round(y));
    const x2 = Math.min(this.width, Math.round(x + w));
    const y2 = Math.min(this.height, Math.round(y + h));
    for (let yy = y1; yy < y2; yy++) {
      for (let xx = x1; xx < x2; xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }

  drawLine(x0: number, y0: number, x1: number, y1: number, rgb: Rgb): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, rgb);
      if (xa === xb && ya === yb) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }
}

const FONT: Record<string, string[]> = {
  "0": ["01110", "10001", "10011", "10101", "11001", "10001", "01110"],
  "1": ["00100", "01100", "00100", "00100", "00100", "00100", "01110"],
  "2": ["01110", "10001", "00001", "00010", "00100", "01000", "11111"],
  "3": ["11111", "00010", "00100", "00010", "00001", "10001", "01110"],
  "4": ["00010", "00110", "01010", "10010", "11111", "00010", "00010"],
  "5": ["11111", "10000", "11110", "00001", "00001", "10001", "01110"],
  "6": ["00110", "01000", "10000", "11110", "10001", "10001", "01110"],
  "7": ["11111", "00001", "00010", "00100", "01000", "01000", "01000"],
  "8": ["01110", "10001", "10001", "01110", "10001", "10001", "01110"],
  "9": ["01110", "10001", "10001", "01111", "00001", "00010", "01100"],
  ".": ["00000", "00000", "00000", "00000", "00000", "01100", "01100"],
  "-": ["00000", "00000", "00000", "11111", "00000", "00000", "00000"],
  "=": ["00000", "00000", "11111", "00000", "11111", "00000", "00000"],
  " ": ["00000", "00000", "00000", "00000", "00000", "00000", "00000"],
  "t": ["01000", "01000", "11100", "01000", "01000", "01001", "00110"],
  "u": ["00000", "00000", "10001", "10001", "10001", "10011", "01101"],
  "h": ["10000", "10000", "10110", "11001", "10001", "10001", "10001"],
  "e": ["00000", "00000", "01110", "10001", "11111", "10000", "01110"],
  "a": ["00000", "00000", "01110", "00001", "01111", "10001", "01111"],
  "r": ["00000", "00000", "10110", "11001", "10000", "10000", "10000"],
  "o": ["00000", "00000", "01110", "10001", "10001", "10001", "01110"],
};

export function glyphRows(char: string): string[] {
  const rows = FONT[char];
  if (!rows) {
    // Unknown characters render as a filled box so they are obvious.
    return ["11111", "11111", "11111", "11111", "11111", "11111", "11111"];
  }
  return rows;
}

function drawText(raster: Raster, prim: TextPrim): void {
  const scale = Math.max(1, Math.round(prim.scale));
  let left = anchoredLeft(prim);
  const top = Math.round(prim.y);
  for (const char of prim.text) {
    const rows = glyphRows(char);
    for (let gy = 0; gy < GLYPH_H; gy++) {
      for (let gx = 0; gx < GLYPH_W; gx++) {
        if (rows[gy]![gx] === "1") {
          raster.fillRect(left + gx * scale, top + gy * scale,
                          scale, scale, prim.fill);
        }
      }
    }
    left += GLYPH_ADVANCE * scale;
  }
}

function drawPrimitive(raster: Raster, prim: Primitive): void {
  if (prim.kind === "rect") {
    raster.fillRect(prim.x, prim.y, prim.w, prim.h, prim.fill);
  } else if (prim.kind === "polyline") {
    const pts = prim.points;
    for (let k = 0; k + 3 < pts.length; k += 2) {
      raster.drawLine(pts[k]!, pts[k + 1]!, pts[k + 2]!, pts[k + 3]!,
                      prim.stroke);
    }
  } else {
    drawText(raster, prim);
  }
}

export function rasterize(scene: Scene): Raster {
  const raster = new Raster(scene.width, scene.height, scene.background);
  for (const prim of scene.prims) {
    drawPrimitive(raster, prim);
  }
  return raster;
}
