import * as path from "node:path";
import { describe, expect, it } from "vitest";
import {
  MissingModelFileError,
  detectFaces,
  detectSingleFace,
  loadModel,
  shapeForBox,
} from "../src/detect";
import { GrayImage, newGray } from "../src/png";
import { mulberry32, uniform } from "../src/rng";
import { placeTemplate, renderFace, template68 } from "../src/template";

const MODEL = loadModel(path.resolve(__dirname, "..", "model", "model.json"));
const SHAPE_Y_MID = 0.285;

function faceWindow(rand: () => number, side: number, sigma: number): GrayImage {
  const pts = placeTemplate({
    center: [side / 2, side / 2 - SHAPE_Y_MID * sigma],
    scale: sigma,
    roll: uniform(rand, -0.04, 0.04),
  });
  return renderFace(pts, side, 2, rand);
}

describe("model loading", () => {
  it("raises MissingModelFileError for a bad path", () => {
    expect(() => loadModel("/nonexistent/model.json")).toThrow(MissingModelFileError);
  });

  it("bundled model carries a full 68-point mean shape inside the window", () => {
    expect(template68()).toHaveLength(68);
    expect(MODEL.meanShape).toHaveLength(68);
    for (const [nx, ny] of MODEL.meanShape) {
      expect(nx).toBeGreaterThanOrEqual(0);
      expect(nx).toBeLessThanOrEqual(1);
      expect(ny).toBeGreaterThanOrEqual(0);
      expect(ny).toBeLessThanOrEqual(1);
    }
  });
});

describe("single-face policy", () => {
  it("finds exactly one face in a centered render", () => {
    const found = detectSingleFace(faceWindow(mulberry32(11), 96, 29), MODEL);
    expect(found.kind).toBe("face");
  });

  it("reports none on a blank image", () => {
    expect(detectSingleFace(newGray(96, 96, 128), MODEL).kind).toBe("none");
  });

  it("reports none when the image is smaller than the window", () => {
    const rand = mulberry32(12);
    expect(detectFaces(faceWindow(rand, 48, 13), MODEL)).toHaveLength(0);
  });

  it("reports multiple for two faces side by side", () => {
    const rand = mulberry32(13);
    const a = faceWindow(rand, 80, 26);
    const b = faceWindow(rand, 80, 26);
    const scene = newGray(160, 80, 40);
    for (let y = 0; y < 80; y++) {
      scene.data.set(a.data.subarray(y * 80, y * 80 + 80), y * 160);
      scene.data.set(b.data.subarray(y * 80, y * 80 + 80), y * 160 + 80);
    }
    const found = detectSingleFace(scene, MODEL);
    expect(found.kind).toBe("multiple");
  });
});

describe("shapeForBox", () => {
  it("anchors the mean shape affinely to the box", () => {
    const box = { x: 10, y: 20, w: 50, h: 40, score: 3 };
    const pts = shapeForBox(box, MODEL);
    expect(pts).toHaveLength(68);
    pts.forEach(([x, y], i) => {
      expect(x).toBeCloseTo(10 + MODEL.meanShape[i][0] * 50, 12);
      expect(y).toBeCloseTo(20 + MODEL.meanShape[i][1] * 40, 12);
    });
  });
});
