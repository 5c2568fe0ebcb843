/** Figure description shared by the PNG and SVG backends.
 *
 * A scene is a flat list of primitives in pixel coordinates with the
 * origin at the top-left corner.  Text position is the top-left of
 * the glyph box; renderers handle anchoring.
 */

import { Rgb } from "./colormap";

export interface RectPrim {
  kind: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
  fill: Rgb;
}

export interface PolylinePrim {
  kind: "polyline";
  /** [x0, y0, x1, y1, ...] */
  points: number[];
  stroke: Rgb;
}

export interface TextPrim {
  kind: "text";
  x: number;
  y: number;
  text: string;
  /** Integer glyph scale; glyph cell is 6x7 scene units at scale 1. */
  scale: number;
  anchor: "start" | "middle" | "end";
  fill: Rgb;
}

export type Primitive = RectPrim | PolylinePrim | TextPrim;

export interface Scene {
  width: number;
  height: number;
  background: Rgb;
  prims: Primitive[];
}

export const GLYPH_W = 5;
export const GLYPH_H = 7;
/** Advance per character including 1 unit of spacing. */
export const GLYPH_ADVANCE = GLYPH_W + 1;

export function textWidth(text: string, scale: number): number {
  if (text.length === 0) {
    return 0;
  }
  return (text.length * GLYPH_ADVANCE - 1) * scale;
}

/** Left edge of an anchored text run. */
export function anchoredLeft(prim: TextPrim): number {
  const width = textWidth(prim.text, prim.scale);
  if (prim.anchor === "middle") {
    return Math.round(prim.x - width / 2);
  }
  if (prim.anchor === "end") {
    return Math.round(prim.x - width);
  }
  return Math.round(prim.x);
}
