/** PNG backend: rasterize the scene and encode with pngjs.  The
 * encoder is pure JavaScript over node's zlib, so identical scenes
 * produce identical bytes. */

import { PNG } from "pngjs";

import { rasterize } from "./raster";
import { Scene } from "./scene";

export function renderPng(scene: Scene): Buffer {
  const raster = rasterize(scene);
  const png = new PNG({ width: raster.width, height: raster.height });
  for (let p = 0; p < raster.width * raster.height; p++) {
    png.data[4 * p] = raster.pixels[3 * p]!;
    png.data[4 * p + 1] = raster.pixels[3 * p + 1]!;
    png.data[4 * p + 2] = raster.pixels[3 * p + 2]!;
    png.data[4 * p + 3] = 255;
  }
  return PNG.sync.write(png);
}
