/** SVG backend: the same scene as markup.  Text becomes real SVG text
 * in a monospace face sized to match the bitmap glyphs. */

import { Rgb } from "./colormap";
import { GLYPH_H, Scene, TextPrim } from "./scene";

function rgb(color: Rgb): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}

function num(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

const ANCHORS = { start: "start", middle: "middle", end: "end" } as const;

function textElement(prim: TextPrim): string {
  const size = GLYPH_H * prim.scale;
  const baseline = prim.y + GLYPH_H * prim.scale;
  return `<text x="${num(prim.x)}" y="${num(baseline)}" ` +
    `font-family="monospace" font-size="${size}" ` +
    `text-anchor="${ANCHORS[prim.anchor]}" fill="${rgb(prim.fill)}">` +
    `${escapeXml(prim.text)}</text>`;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderSvg(scene: Scene): string {
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" ` +
    `width="${scene.width}" height="${scene.height}" ` +
    `viewBox="0 0 ${scene.width} ${scene.height}">`);
  parts.push(`<rect width="${scene.width}" height="${scene.height}" ` +
    `fill="${rgb(scene.background)}"/>`);
  for (const prim of scene.prims) {
    if (prim.kind === "rect") {
      parts.push(`<rect x="${num(prim.x)}" y="${num(prim.y)}" ` +
        `width="${num(prim.w)}" height="${num(prim.h)}" ` +
        `fill="${rgb(prim.fill)}"/>`);
    } else if (prim.kind === "polyline") {
      const pts: string[] = [];
      for (let k = 0; k + 1 < prim.points.length; k += 2) {
        pts.push(`${num(prim.points[k]!)},${num(prim.points[k + 1]!)}`);
      }
      parts.push(`<polyline points="${pts.join(" ")}" fill="none" ` +
        `stroke="${rgb(prim.stroke)}" stroke-width="1"/>`);
    } else {
      parts.push(textElement(prim));
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
