import { readFileSync, writeFileSync } from "node:fs";
import { PNG } from "pngjs";

/** Row-major 8-bit grayscale image. */
export interface GrayImage {
  width: number;
  height: number;
  data: Uint8Array;
}

export function newGray(width: number, height: number, value = 0): GrayImage {
  return { width, height, data: new Uint8Array(width * height).fill(value) };
}

export function readGray(path: string): GrayImage {
  const png = PNG.sync.read(readFileSync(path));
  const data = new Uint8Array(png.width * png.height);
  for (let i = 0; i < data.length; i++) {
    const r = png.data[i * 4];
    const g = png.data[i * 4 + 1];
    const b = png.data[i * 4 + 2];
    // BT.601 luma; the exact coefficients only matter for color sources
    data[i] = Math.round(0.299 * r + 0.587 * g + 0.114 * b);
  }
  return { width: png.width, height: png.height, data };
}

export function writeGray(img: GrayImage, path: string): void {
  const png = new PNG({ width: img.width, height: img.height });
  for (let i = 0; i < img.data.length; i++) {
    png.data[i * 4] = img.data[i];
    png.data[i * 4 + 1] = img.data[i];
    png.data[i * 4 + 2] = img.data[i];
    png.data[i * 4 + 3] = 255;
  }
  writeFileSync(path, PNG.sync.write(png, { colorType: 0 }));
}

/** Integer nearest-neighbor upscale; keeps tiny sources blocky instead of
 * inventing gradients the detector was never trained on. */
export function upscaleNearest(img: GrayImage, factor: number): GrayImage {
  if (!Number.isInteger(factor) || factor < 1) {
    throw new Error(`upscale factor must be an integer >= 1, got ${factor}`);
  }
  if (factor === 1) return img;
  const out = newGray(img.width * factor, img.height * factor);
  for (let y = 0; y < out.height; y++) {
    const sy = Math.floor(y / factor) * img.width;
    for (let x = 0; x < out.width; x++) {
      out.data[y * out.width + x] = img.data[sy + Math.floor(x / factor)];
    }
  }
  return out;
}

/** Bilinear resize with pixel-center sampling; used for the detection
 * pyramid only, so it does not need to match any external resizer. */
export function resizeBilinear(img: GrayImage, width: number, height: number): GrayImage {
  const out = newGray(width, height);
  const fx = img.width / width;
  const fy = img.height / height;
  for (let y = 0; y < height; y++) {
    let sy = (y + 0.5) * fy - 0.5;
    sy = Math.min(Math.max(sy, 0), img.height - 1);
    const y0 = Math.floor(sy);
    const y1 = Math.min(y0 + 1, img.height - 1);
    const wy = sy - y0;
    for (let x = 0; x < width; x++) {
      let sx = (x + 0.5) * fx - 0.5;
      sx = Math.min(Math.max(sx, 0), img.width - 1);
      const x0 = Math.floor(sx);
      const x1 = Math.min(x0 + 1, img.width - 1);
      const wx = sx - x0;
      const top = img.data[y0 * img.width + x0] * (1 - wx) + img.data[y0 * img.width + x1] * wx;
      const bot = img.data[y1 * img.width + x0] * (1 - wx) + img.data[y1 * img.width + x1] * wx;
      out.data[y * width + x] = Math.round(top * (1 - wy) + bot * wy);
    }
  }
  return out;
}
