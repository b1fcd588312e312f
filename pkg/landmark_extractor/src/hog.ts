import { GrayImage } from "./png";

/** Histogram-of-oriented-gradients features, the standard recipe:
 * unsigned gradient orientations binned per cell, then overlapping
 * 2x2-cell blocks L2-normalized. Windows are assembled from the block
 * grid, so a whole pyramid level is featurized once and every window
 * position is just a gather. */

export interface HogParams {
  cell: number;   // cell side in px
  bins: number;   // orientation bins over [0, pi)
  block: number;  // block side in cells
}

export const HOG_DEFAULT: HogParams = { cell: 8, bins: 9, block: 2 };

export interface CellGrid {
  hist: Float64Array; // [ch][cw][bins]
  cw: number;
  ch: number;
}

export function cellHistograms(img: GrayImage, p: HogParams): CellGrid {
  const cw = Math.floor(img.width / p.cell);
  const ch = Math.floor(img.height / p.cell);
  const hist = new Float64Array(cw * ch * p.bins);
  const { width, height, data } = img;
  const binWidth = Math.PI / p.bins;

  for (let y = 0; y < ch * p.cell; y++) {
    const ym = Math.max(y - 1, 0) * width;
    const yp = Math.min(y + 1, height - 1) * width;
    const row = y * width;
    const cellY = Math.floor(y / p.cell);
    for (let x = 0; x < cw * p.cell; x++) {
      const gx = data[row + Math.min(x + 1, width - 1)] - data[row + Math.max(x - 1, 0)];
      const gy = data[yp + x] - data[ym + x];
      const mag = Math.hypot(gx, gy);
      if (mag === 0) continue;
      let angle = Math.atan2(gy, gx);
      if (angle < 0) angle += Math.PI; // unsigned
      if (angle >= Math.PI) angle = 0;
      // linear interpolation between the two nearest bins
      const pos = angle / binWidth - 0.5;
      let b0 = Math.floor(pos);
      const frac = pos - b0;
      if (b0 < 0) b0 += p.bins;
      const b1 = (b0 + 1) % p.bins;
      const cellX = Math.floor(x / p.cell);
      const base = (cellY * cw + cellX) * p.bins;
      hist[base + b0] += mag * (1 - frac);
      hist[base + b1] += mag * frac;
    }
  }
  return { hist, cw, ch };
}

export interface BlockGrid {
  blocks: Float64Array; // [bh][bw][block*block*bins]
  bw: number;
  bh: number;
  blockLen: number;
}

export function blockGrid(cells: CellGrid, p: HogParams): BlockGrid {
  const bw = cells.cw - p.block + 1;
  const bh = cells.ch - p.block + 1;
  const blockLen = p.block * p.block * p.bins;
  const blocks = new Float64Array(Math.max(bw, 0) * Math.max(bh, 0) * blockLen);
  for (let by = 0; by < bh; by++) {
    for (let bx = 0; bx < bw; bx++) {
      const out = (by * bw + bx) * blockLen;
      let k = out;
      let norm = 0;
      for (let cy = 0; cy < p.block; cy++) {
        for (let cx = 0; cx < p.block; cx++) {
          const src = ((by + cy) * cells.cw + (bx + cx)) * p.bins;
          for (let b = 0; b < p.bins; b++) {
            const v = cells.hist[src + b];
            blocks[k++] = v;
            norm += v * v;
          }
        }
      }
      norm = Math.sqrt(norm) + 1e-6;
      for (let i = out; i < out + blockLen; i++) blocks[i] /= norm;
    }
  }
  return { blocks, bw, bh, blockLen };
}

export function descriptorLength(windowCells: number, p: HogParams): number {
  const n = windowCells - p.block + 1;
  return n * n * p.block * p.block * p.bins;
}

/** Descriptor of the window whose top-left cell is (cellX, cellY). */
export function windowDescriptor(
  grid: BlockGrid,
  cellX: number,
  cellY: number,
  windowCells: number,
  p: HogParams,
): Float64Array {
  const n = windowCells - p.block + 1;
  const desc = new Float64Array(n * n * grid.blockLen);
  let k = 0;
  for (let by = 0; by < n; by++) {
    const rowBase = ((cellY + by) * grid.bw + cellX) * grid.blockLen;
    desc.set(grid.blocks.subarray(rowBase, rowBase + n * grid.blockLen), k);
    k += n * grid.blockLen;
  }
  return desc;
}

export function dot(w: ArrayLike<number>, x: Float64Array): number {
  let s = 0;
  for (let i = 0; i < x.length; i++) s += w[i] * x[i];
  return s;
}
