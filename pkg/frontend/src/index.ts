export { PlotError } from "./errors";
export { COLORMAP_NAMES, colormap, normalize } from "./colormap";
export { buildControlScene, buildDensityScene, fmtTick,
         niceTicks } from "./figures";
export { Raster, rasterize } from "./raster";
export { renderPng } from "./render_png";
export { renderSvg } from "./render_svg";
export { FORMATS, defaultJob, runJob, sharedRange } from "./run";
export type { ImageFormat, PlotJob } from "./run";
export { discoverRun, loadControl, loadDensity } from "./tables";
export type { ControlCurve, DensitySnapshot } from "./tables";
export type { Primitive, Scene, TextPrim } from "./scene";
