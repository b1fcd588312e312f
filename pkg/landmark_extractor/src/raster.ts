import { GrayImage } from "./png";

/** Minimal painting helpers for the synthetic training/fixture scenes.
 * Nothing here is anti-aliased; the detector is trained on exactly what
 * these produce. */

export type Point = [number, number];

export function verticalGradient(img: GrayImage, from: number, to: number): void {
  for (let y = 0; y < img.height; y++) {
    const v = Math.round(from + ((to - from) * y) / Math.max(img.height - 1, 1));
    img.data.fill(v, y * img.width, (y + 1) * img.width);
  }
}

export function fillEllipse(img: GrayImage, cx: number, cy: number, rx: number, ry: number, value: number): void {
  const y0 = Math.max(0, Math.floor(cy - ry));
  const y1 = Math.min(img.height - 1, Math.ceil(cy + ry));
  for (let y = y0; y <= y1; y++) {
    const t = (y + 0.5 - cy) / ry;
    const s = 1 - t * t;
    if (s < 0) continue;
    const half = rx * Math.sqrt(s);
    const x0 = Math.max(0, Math.ceil(cx - half - 0.5));
    const x1 = Math.min(img.width - 1, Math.floor(cx + half - 0.5));
    for (let x = x0; x <= x1; x++) img.data[y * img.width + x] = value;
  }
}

/** Even-odd scanline polygon fill over pixel centers. */
export function fillPolygon(img: GrayImage, pts: Point[], value: number): void {
  const ys = pts.map((p) => p[1]);
  const y0 = Math.max(0, Math.floor(Math.min(...ys)));
  const y1 = Math.min(img.height - 1, Math.ceil(Math.max(...ys)));
  for (let y = y0; y <= y1; y++) {
    const cy = y + 0.5;
    const xs: number[] = [];
    for (let i = 0; i < pts.length; i++) {
      const [ax, ay] = pts[i];
      const [bx, by] = pts[(i + 1) % pts.length];
      if (ay === by) continue;
      if ((cy >= ay && cy < by) || (cy >= by && cy < ay)) {
        xs.push(ax + ((cy - ay) * (bx - ax)) / (by - ay));
      }
    }
    xs.sort((a, b) => a - b);
    for (let k = 0; k + 1 < xs.length; k += 2) {
      const x0 = Math.max(0, Math.ceil(xs[k] - 0.5));
      const x1 = Math.min(img.width - 1, Math.floor(xs[k + 1] - 0.5));
      for (let x = x0; x <= x1; x++) img.data[y * img.width + x] = value;
    }
  }
}

export function drawSegment(img: GrayImage, a: Point, b: Point, value: number, width = 1): void {
  const steps = Math.max(1, Math.ceil(Math.hypot(b[0] - a[0], b[1] - a[1]) * 2));
  const r = width / 2;
  for (let s = 0; s <= steps; s++) {
    const t = s / steps;
    const px = a[0] + (b[0] - a[0]) * t;
    const py = a[1] + (b[1] - a[1]) * t;
    for (let y = Math.floor(py - r); y <= Math.ceil(py + r); y++) {
      for (let x = Math.floor(px - r); x <= Math.ceil(px + r); x++) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
        img.data[y * img.width + x] = value;
      }
    }
  }
}

export function drawPolyline(img: GrayImage, pts: Point[], value: number, width = 1): void {
  for (let i = 0; i + 1 < pts.length; i++) drawSegment(img, pts[i], pts[i + 1], value, width);
}

export function addNoise(img: GrayImage, amount: number, rand: () => number): void {
  for (let i = 0; i < img.data.length; i++) {
    const v = img.data[i] + (rand() * 2 - 1) * amount;
    img.data[i] = Math.max(0, Math.min(255, Math.round(v)));
  }
}
