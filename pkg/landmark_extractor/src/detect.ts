import { existsSync, readFileSync } from "node:fs";
import {
  HogParams,
  blockGrid,
  cellHistograms,
  descriptorLength,
  dot,
  windowDescriptor,
} from "./hog";
import { GrayImage, resizeBilinear } from "./png";
import { Point } from "./raster";

export class MissingModelFileError extends Error {}

export interface DetectorModel {
  window: number; // detection window side in px
  cell: number;
  bins: number;
  block: number;
  weights: number[];
  bias: number;
  threshold: number;
  meanShape: Point[]; // 68 points in window-relative [0,1] coords
  trainedOn: string;
}

export function loadModel(path: string): DetectorModel {
  if (!existsSync(path)) {
    throw new MissingModelFileError(`detector model not found: ${path}`);
  }
  const model = JSON.parse(readFileSync(path, "utf-8")) as DetectorModel;
  const p = hogParams(model);
  const want = descriptorLength(model.window / model.cell, p);
  if (model.weights.length !== want) {
    throw new Error(`model weight length ${model.weights.length}, expected ${want}`);
  }
  if (model.meanShape.length !== 68) {
    throw new Error(`model mean shape has ${model.meanShape.length} points, expected 68`);
  }
  return model;
}

export function hogParams(model: DetectorModel): HogParams {
  return { cell: model.cell, bins: model.bins, block: model.block };
}

export interface Detection {
  x: number;
  y: number;
  w: number;
  h: number;
  score: number;
}

/** Intersection over the smaller area, so a window nested inside a bigger
 * detection counts as fully overlapping (plain IoU lets those through). */
function overlap(a: Detection, b: Detection): number {
  const x0 = Math.max(a.x, b.x);
  const y0 = Math.max(a.y, b.y);
  const x1 = Math.min(a.x + a.w, b.x + b.w);
  const y1 = Math.min(a.y + a.h, b.y + b.h);
  const inter = Math.max(0, x1 - x0) * Math.max(0, y1 - y0);
  return inter / Math.min(a.w * a.h, b.w * b.h);
}

function nms(dets: Detection[], maxOverlap = 0.4): Detection[] {
  const sorted = [...dets].sort((a, b) => b.score - a.score);
  const kept: Detection[] = [];
  for (const d of sorted) {
    if (kept.every((k) => overlap(k, d) <= maxOverlap)) kept.push(d);
  }
  return kept;
}

export const PYRAMID_STEP = 1.25;

/** All windows scoring above the model threshold, after non-maximum
 * suppression, in the coordinates of `gray`. */
export function detectFaces(gray: GrayImage, model: DetectorModel): Detection[] {
  const p = hogParams(model);
  const windowCells = model.window / model.cell;
  const raw: Detection[] = [];
  for (let scale = 1; Math.min(gray.width, gray.height) / scale >= model.window; scale *= PYRAMID_STEP) {
    const sw = Math.round(gray.width / scale);
    const sh = Math.round(gray.height / scale);
    const level = scale === 1 ? gray : resizeBilinear(gray, sw, sh);
    const grid = blockGrid(cellHistograms(level, p), p);
    // windows are aligned to the cell grid, so the slide stride is one cell
    const maxCellX = Math.floor(level.width / model.cell) - windowCells;
    const maxCellY = Math.floor(level.height / model.cell) - windowCells;
    const sx = gray.width / level.width;
    const sy = gray.height / level.height;
    for (let cy = 0; cy <= maxCellY; cy++) {
      for (let cx = 0; cx <= maxCellX; cx++) {
        const desc = windowDescriptor(grid, cx, cy, windowCells, p);
        const score = dot(model.weights, desc) + model.bias;
        if (score < model.threshold) continue;
        raw.push({
          x: cx * model.cell * sx,
          y: cy * model.cell * sy,
          w: model.window * sx,
          h: model.window * sy,
          score,
        });
      }
    }
  }
  return nms(raw);
}

export type SingleFace =
  | { kind: "face"; box: Detection }
  | { kind: "none" }
  | { kind: "multiple"; count: number };

/** Exactly-one-face policy: ambiguity is reported, never guessed away. */
export function detectSingleFace(gray: GrayImage, model: DetectorModel): SingleFace {
  const dets = detectFaces(gray, model);
  if (dets.length === 0) return { kind: "none" };
  if (dets.length > 1) return { kind: "multiple", count: dets.length };
  return { kind: "face", box: dets[0] };
}

/** Anchor the model's mean shape to a detected box. */
export function shapeForBox(box: Detection, model: DetectorModel): Point[] {
  return model.meanShape.map(([nx, ny]) => [box.x + nx * box.w, box.y + ny * box.h]);
}
