import { GrayImage, newGray } from "./png";
import {
  Point,
  addNoise,
  drawPolyline,
  fillEllipse,
  fillPolygon,
  verticalGradient,
} from "./raster";

/**
 * Canonical 68-point face layout in iBUG index order (jaw 0-16, brows
 * 17-26, nose 27-35, eyes 36-47, mouth 48-67), unit half-width, y down.
 * Used to synthesize training scenes and as the basis of the mean shape
 * the detector anchors to a face box.
 */
export function template68(): Point[] {
  const pts: Point[] = [];
  for (let i = 0; i < 17; i++) {
    const t = (i * Math.PI) / 16;
    pts.push([-Math.cos(t), Math.sin(t) * 1.12]);
  }
  pts.push([-0.62, -0.46], [-0.5, -0.52], [-0.38, -0.55], [-0.26, -0.52], [-0.16, -0.46]);
  pts.push([0.16, -0.46], [0.26, -0.52], [0.38, -0.55], [0.5, -0.52], [0.62, -0.46]);
  pts.push([0, -0.34], [0, -0.2], [0, -0.06], [0, 0.1]);
  pts.push([-0.12, 0.2], [-0.06, 0.23], [0, 0.24], [0.06, 0.23], [0.12, 0.2]);
  pts.push([-0.58, -0.3], [-0.5, -0.36], [-0.34, -0.36], [-0.26, -0.3], [-0.34, -0.24], [-0.5, -0.24]);
  pts.push([0.26, -0.3], [0.34, -0.36], [0.5, -0.36], [0.58, -0.3], [0.5, -0.24], [0.34, -0.24]);
  pts.push(
    [-0.35, 0.55], [-0.22, 0.47], [-0.08, 0.44], [0, 0.45], [0.08, 0.44], [0.22, 0.47],
    [0.35, 0.55], [0.22, 0.64], [0.08, 0.68], [0, 0.67], [-0.08, 0.68], [-0.22, 0.64],
  );
  pts.push(
    [-0.28, 0.55], [-0.1, 0.5], [0, 0.51], [0.1, 0.5],
    [0.28, 0.55], [0.1, 0.61], [0, 0.62], [-0.1, 0.61],
  );
  return pts;
}

export interface Placement {
  center: Point;
  scale: number;
  roll?: number;
}

export function placeTemplate(p: Placement): Point[] {
  const roll = p.roll ?? 0;
  const c = Math.cos(roll);
  const s = Math.sin(roll);
  return template68().map(([x, y]) => {
    const sx = x * p.scale;
    const sy = y * p.scale;
    return [p.center[0] + sx * c - sy * s, p.center[1] + sx * s + sy * c];
  });
}

/** Paint a simple but face-like scene around the landmarks: head disc,
 * dark eye wells, brows, nose ridge, mouth. */
export function renderFace(pts: Point[], size: number, noise = 0, rand?: () => number): GrayImage {
  const img = newGray(size, size);
  verticalGradient(img, 40, 90);

  const jaw = pts.slice(0, 17);
  const ys = pts.map((p) => p[1]);
  const headCx = jaw.reduce((acc, p) => acc + p[0], 0) / jaw.length;
  const headCy = ys.reduce((a, b) => a + b, 0) / ys.length;
  const rx = ((Math.max(...jaw.map((p) => p[0])) - Math.min(...jaw.map((p) => p[0]))) / 2) * 1.05;
  const ry = ((Math.max(...ys) - Math.min(...ys)) / 2) * 1.25;
  fillEllipse(img, headCx, headCy, rx, ry, 190);

  fillPolygon(img, pts.slice(36, 42), 25);
  fillPolygon(img, pts.slice(42, 48), 25);
  drawPolyline(img, pts.slice(17, 22), 60, 2);
  drawPolyline(img, pts.slice(22, 27), 60, 2);
  drawPolyline(img, pts.slice(27, 31), 120, 1);
  drawPolyline(img, pts.slice(31, 36), 100, 1);
  fillPolygon(img, pts.slice(48, 60), 70);

  if (noise > 0 && rand) addNoise(img, noise, rand);
  return img;
}
