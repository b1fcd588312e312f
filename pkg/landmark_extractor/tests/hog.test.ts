import { describe, expect, it } from "vitest";
import {
  HOG_DEFAULT,
  blockGrid,
  cellHistograms,
  descriptorLength,
  windowDescriptor,
} from "../src/hog";
import { newGray } from "../src/png";
import { mulberry32 } from "../src/rng";

function summedBins(img: ReturnType<typeof newGray>): number[] {
  const cells = cellHistograms(img, HOG_DEFAULT);
  const sums = new Array(HOG_DEFAULT.bins).fill(0);
  for (let i = 0; i < cells.hist.length; i++) {
    sums[i % HOG_DEFAULT.bins] += cells.hist[i];
  }
  return sums;
}

describe("hog", () => {
  it("descriptor for a 64 px window has 1764 entries", () => {
    expect(descriptorLength(8, HOG_DEFAULT)).toBe(1764);
  });

  it("constant image yields an all-zero descriptor", () => {
    const img = newGray(64, 64, 133);
    const desc = windowDescriptor(blockGrid(cellHistograms(img, HOG_DEFAULT), HOG_DEFAULT), 0, 0, 8, HOG_DEFAULT);
    expect(desc.length).toBe(1764);
    expect(desc.every((v) => v === 0)).toBe(true);
  });

  it("vertical edge lands in the wrap bins, horizontal edge in the middle bin", () => {
    const vertical = newGray(64, 64, 0);
    for (let y = 0; y < 64; y++) {
      for (let x = 32; x < 64; x++) vertical.data[y * 64 + x] = 255;
    }
    // horizontal gradient, unsigned angle 0: split evenly across the seam
    const v = summedBins(vertical);
    const vTotal = v.reduce((a, b) => a + b, 0);
    expect(v[0] + v[8]).toBeGreaterThan(0.99 * vTotal);
    expect(v[0]).toBeCloseTo(v[8], 6);

    const horizontal = newGray(64, 64, 0);
    for (let y = 32; y < 64; y++) {
      for (let x = 0; x < 64; x++) horizontal.data[y * 64 + x] = 255;
    }
    // vertical gradient, angle pi/2: interpolation puts it all in bin 4
    const h = summedBins(horizontal);
    const hTotal = h.reduce((a, b) => a + b, 0);
    expect(h[4]).toBeGreaterThan(0.99 * hTotal);
  });

  it("every block slice of a textured window is L2-normalized", () => {
    const rand = mulberry32(7);
    const img = newGray(64, 64, 0);
    for (let i = 0; i < img.data.length; i++) img.data[i] = Math.floor(rand() * 256);
    const desc = windowDescriptor(blockGrid(cellHistograms(img, HOG_DEFAULT), HOG_DEFAULT), 0, 0, 8, HOG_DEFAULT);
    const blockLen = HOG_DEFAULT.block * HOG_DEFAULT.block * HOG_DEFAULT.bins;
    for (let start = 0; start < desc.length; start += blockLen) {
      let norm = 0;
      for (let i = start; i < start + blockLen; i++) norm += desc[i] * desc[i];
      expect(Math.sqrt(norm)).toBeGreaterThan(0.9);
      expect(Math.sqrt(norm)).toBeLessThanOrEqual(1.0001);
    }
  });
});
