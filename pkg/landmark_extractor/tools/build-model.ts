/** Fit the bundled linear HOG face detector on synthetic renders.
 *
 * Everything is seeded, so the emitted model/model.json is reproducible.
 * Run via `npm run fit-model`.
 */
import { mkdirSync, writeFileSync } from "node:fs";
import * as path from "node:path";
import { DetectorModel, Detection, detectFaces } from "../src/detect";
import {
  HOG_DEFAULT,
  blockGrid,
  cellHistograms,
  descriptorLength,
  dot,
  windowDescriptor,
} from "../src/hog";
import { GrayImage, newGray, resizeBilinear, upscaleNearest } from "../src/png";
import { addNoise, drawSegment, fillEllipse, Point } from "../src/raster";
import { mulberry32, shuffle, uniform } from "../src/rng";
import { placeTemplate, renderFace, template68 } from "../src/template";

const WINDOW = 64;
const WINDOW_CELLS = WINDOW / HOG_DEFAULT.cell;
const DESC_LEN = descriptorLength(WINDOW_CELLS, HOG_DEFAULT);
// vertical midpoint of the template's y extent [-0.55, 1.12]
const SHAPE_Y_MID = 0.285;

function descriptorOf(img: GrayImage): Float64Array {
  const grid = blockGrid(cellHistograms(img, HOG_DEFAULT), HOG_DEFAULT);
  return windowDescriptor(grid, 0, 0, WINDOW_CELLS, HOG_DEFAULT);
}

interface Positive {
  img: GrayImage;
  ptsNorm: Point[]; // landmarks divided by the window side
}

type Rand = () => number;

/** A face framed the way a detection window would see it.
 *
 * variant 0: crisp render straight at window size
 * variant 1: rendered at 2x and downsampled (pyramid-level blur)
 * variant 2: rendered tiny and nearest-upscaled (thumbnail blockiness)
 */
function renderPositive(rand: Rand, jitterPx: number): Positive {
  const variant = Math.floor(rand() * 3);
  const sigma = uniform(rand, 20, 30);
  const jx = uniform(rand, -jitterPx, jitterPx);
  const jy = uniform(rand, -jitterPx, jitterPx);
  const roll = uniform(rand, -0.06, 0.06);
  const noise = uniform(rand, 0, 8);

  const k = variant === 1 ? 2 : variant === 2 ? 0.5 : 1;
  const side = Math.round(WINDOW * k);
  const pts = placeTemplate({
    center: [side / 2 + jx * k, side / 2 - SHAPE_Y_MID * sigma * k + jy * k],
    scale: sigma * k,
    roll,
  });
  let img = renderFace(pts, side, noise, rand);
  if (variant === 1) img = resizeBilinear(img, WINDOW, WINDOW);
  if (variant === 2) img = upscaleNearest(img, 2);
  return { img, ptsNorm: pts.map(([x, y]) => [x / side, y / side]) };
}

/** Structured non-face clutter: gradients, blobs, strokes, noise. */
function renderClutter(rand: Rand, side: number): GrayImage {
  const img = newGray(side, side, Math.floor(uniform(rand, 20, 120)));
  const blobs = Math.floor(uniform(rand, 0, 6));
  for (let i = 0; i < blobs; i++) {
    fillEllipse(
      img,
      uniform(rand, 0, side),
      uniform(rand, 0, side),
      uniform(rand, 2, side / 2),
      uniform(rand, 2, side / 2),
      Math.floor(uniform(rand, 0, 255)),
    );
  }
  const strokes = Math.floor(uniform(rand, 0, 8));
  for (let i = 0; i < strokes; i++) {
    const a: Point = [uniform(rand, 0, side), uniform(rand, 0, side)];
    const b: Point = [uniform(rand, 0, side), uniform(rand, 0, side)];
    drawSegment(img, a, b, Math.floor(uniform(rand, 0, 255)), Math.ceil(uniform(rand, 1, 3)));
  }
  addNoise(img, uniform(rand, 0, 12), rand);
  return img;
}

interface FaceScene {
  img: GrayImage;
  faceBox: { x: number; y: number; w: number; h: number };
}

/** A fixture-style scene: one face roughly centered in a 96 px frame. */
function renderFaceScene(rand: Rand): FaceScene {
  const side = 96;
  const sigma = uniform(rand, 24, 33);
  const cx = side / 2 + uniform(rand, -3, 3);
  const cy = side / 2 + uniform(rand, -3, 3);
  const pts = placeTemplate({
    center: [cx, cy - SHAPE_Y_MID * sigma],
    scale: sigma,
    roll: uniform(rand, -0.05, 0.05),
  });
  const img = renderFace(pts, side, uniform(rand, 0, 4), rand);
  // nominal detection box: the window a centered training positive implies
  const boxSide = (WINDOW / 25) * sigma;
  return {
    img,
    faceBox: { x: cx - boxSide / 2, y: cy - boxSide / 2, w: boxSide, h: boxSide },
  };
}

/** A FER-style thumbnail blown up the way extraction would see it:
 * rendered at 48 px, nearest-upscaled x4. */
function renderThumbScene(rand: Rand): FaceScene {
  const side = 48;
  const factor = 4;
  const sigma = uniform(rand, 11, 15);
  const cx = side / 2 + uniform(rand, -2, 2);
  const cy = side / 2 + uniform(rand, -2, 2);
  const pts = placeTemplate({
    center: [cx, cy - SHAPE_Y_MID * sigma],
    scale: sigma,
    roll: uniform(rand, -0.04, 0.04),
  });
  const img = upscaleNearest(renderFace(pts, side, uniform(rand, 0, 3), rand), factor);
  const boxSide = (WINDOW / 25) * sigma * factor;
  return {
    img,
    faceBox: {
      x: cx * factor - boxSide / 2,
      y: cy * factor - boxSide / 2,
      w: boxSide,
      h: boxSide,
    },
  };
}

function boxIou(
  a: { x: number; y: number; w: number; h: number },
  b: { x: number; y: number; w: number; h: number },
): number {
  const x0 = Math.max(a.x, b.x);
  const y0 = Math.max(a.y, b.y);
  const x1 = Math.min(a.x + a.w, b.x + b.w);
  const y1 = Math.min(a.y + a.h, b.y + b.h);
  const inter = Math.max(0, x1 - x0) * Math.max(0, y1 - y0);
  return inter / (a.w * a.h + b.w * b.h - inter);
}

interface ScannedWindow {
  desc: Float64Array;
  box: { x: number; y: number; w: number; h: number };
}

/** Every cell-aligned window at every pyramid level, mapped back to the
 * scene frame. Mirrors the slide in detectFaces. */
function scanWindows(gray: GrayImage): ScannedWindow[] {
  const out: ScannedWindow[] = [];
  for (let scale = 1; Math.min(gray.width, gray.height) / scale >= WINDOW; scale *= 1.25) {
    const sw = Math.round(gray.width / scale);
    const sh = Math.round(gray.height / scale);
    const level = scale === 1 ? gray : resizeBilinear(gray, sw, sh);
    const grid = blockGrid(cellHistograms(level, HOG_DEFAULT), HOG_DEFAULT);
    const maxCellX = Math.floor(level.width / HOG_DEFAULT.cell) - WINDOW_CELLS;
    const maxCellY = Math.floor(level.height / HOG_DEFAULT.cell) - WINDOW_CELLS;
    const sx = gray.width / level.width;
    const sy = gray.height / level.height;
    for (let cy = 0; cy <= maxCellY; cy++) {
      for (let cx = 0; cx <= maxCellX; cx++) {
        out.push({
          desc: windowDescriptor(grid, cx, cy, WINDOW_CELLS, HOG_DEFAULT),
          box: {
            x: cx * HOG_DEFAULT.cell * sx,
            y: cy * HOG_DEFAULT.cell * sy,
            w: WINDOW * sx,
            h: WINDOW * sy,
          },
        });
      }
    }
  }
  return out;
}

interface Trained {
  weights: Float64Array;
  bias: number;
}

function trainLogistic(
  pos: Float64Array[],
  neg: Float64Array[],
  rand: Rand,
  epochs = 80,
  l2 = 3e-5,
): Trained {
  const w = new Float64Array(DESC_LEN);
  let b = 0;
  const samples = [
    ...pos.map((x) => ({ x, y: 1 })),
    ...neg.map((x) => ({ x, y: 0 })),
  ];
  for (let epoch = 0; epoch < epochs; epoch++) {
    const lr = 0.1 / (1 + 0.05 * epoch);
    shuffle(rand, samples);
    for (const { x, y } of samples) {
      const z = dot(w, x) + b;
      const p = 1 / (1 + Math.exp(-z));
      const g = p - y;
      const decay = 1 - lr * l2;
      for (let i = 0; i < DESC_LEN; i++) {
        w[i] = w[i] * decay - lr * g * x[i];
      }
      b -= lr * g;
    }
  }
  return { weights: w, bias: b };
}

function scores(model: Trained, descs: Float64Array[]): number[] {
  return descs.map((d) => dot(model.weights, d) + model.bias);
}

function main(): void {
  const rand = mulberry32(0x5eed);
  console.log(`descriptor length ${DESC_LEN}`);

  // mean shape from aligned (jitter-free, roll-free) geometry
  const pts0 = placeTemplate({
    center: [WINDOW / 2, WINDOW / 2 - SHAPE_Y_MID * 25],
    scale: 25,
  });
  const meanShape: Point[] = pts0.map(([x, y]) => [x / WINDOW, y / WINDOW]);

  // jitter up to the cell snap a sliding window can be off by
  const posImgs: Positive[] = [];
  for (let i = 0; i < 600; i++) posImgs.push(renderPositive(rand, 4));
  const pos = posImgs.map((s) => descriptorOf(s.img));

  const neg: Float64Array[] = [];
  for (let i = 0; i < 300; i++) neg.push(descriptorOf(renderClutter(rand, WINDOW)));
  for (let i = 0; i < 100; i++) {
    const flat = newGray(WINDOW, WINDOW, Math.floor(uniform(rand, 0, 255)));
    addNoise(flat, uniform(rand, 0, 6), rand);
    neg.push(descriptorOf(flat));
  }

  let trained = trainLogistic(pos, neg, rand);

  // hard-negative mining: rescan scenes, keep confident false positives
  for (let round = 0; round < 2; round++) {
    const hard: { score: number; desc: Float64Array }[] = [];
    for (let i = 0; i < 30; i++) {
      const size = 96 + 16 * Math.floor(rand() * 4);
      for (const win of scanWindows(renderClutter(rand, size))) {
        const s = dot(trained.weights, win.desc) + trained.bias;
        if (s > -1) hard.push({ score: s, desc: win.desc });
      }
    }
    for (let i = 0; i < 50; i++) {
      const scene = i % 2 === 0 ? renderFaceScene(rand) : renderThumbScene(rand);
      for (const win of scanWindows(scene.img)) {
        if (boxIou(win.box, scene.faceBox) > 0.25) continue;
        const s = dot(trained.weights, win.desc) + trained.bias;
        if (s > -1) hard.push({ score: s, desc: win.desc });
      }
    }
    hard.sort((a, b) => b.score - a.score);
    const take = hard.slice(0, 600).map((h) => h.desc);
    console.log(`round ${round}: ${hard.length} hard negatives, kept ${take.length}`);
    if (take.length === 0) break;
    neg.push(...take);
    trained = trainLogistic(pos, neg, rand);
  }

  // threshold from fresh validation margins (snap-level misalignment)
  const valPos: Float64Array[] = [];
  for (let i = 0; i < 150; i++) valPos.push(descriptorOf(renderPositive(rand, 4).img));
  const valNeg: Float64Array[] = [];
  for (let i = 0; i < 15; i++) {
    for (const win of scanWindows(renderClutter(rand, 128))) valNeg.push(win.desc);
  }
  for (let i = 0; i < 24; i++) {
    const scene = i % 2 === 0 ? renderFaceScene(rand) : renderThumbScene(rand);
    for (const win of scanWindows(scene.img)) {
      if (boxIou(win.box, scene.faceBox) <= 0.25) valNeg.push(win.desc);
    }
  }
  const trainPos = scores(trained, pos);
  const trainNeg = scores(trained, neg);
  console.log(
    `training: positives [${Math.min(...trainPos).toFixed(2)}, ${Math.max(...trainPos).toFixed(2)}], ` +
      `negatives [${Math.min(...trainNeg).toFixed(2)}, ${Math.max(...trainNeg).toFixed(2)}]`,
  );
  const posScores = scores(trained, valPos);
  const negScores = scores(trained, valNeg);
  const minPos = Math.min(...posScores);
  const maxNeg = Math.max(...negScores);
  console.log(`validation: min positive ${minPos.toFixed(3)}, max negative ${maxNeg.toFixed(3)}`);
  let threshold: number;
  if (minPos > maxNeg) {
    threshold = (minPos + maxNeg) / 2;
  } else {
    // overlap: pick the cut with the fewest validation errors
    const candidates = [...posScores, ...negScores].sort((a, b) => a - b);
    let best = 0;
    let bestErr = Infinity;
    for (const c of candidates) {
      const err =
        posScores.filter((s) => s < c).length + negScores.filter((s) => s >= c).length;
      if (err < bestErr) {
        bestErr = err;
        best = c;
      }
    }
    threshold = best;
    console.warn(`validation margins overlap; threshold ${best.toFixed(3)} leaves ${bestErr} errors`);
  }
  console.log(`threshold ${threshold.toFixed(4)}`);

  const model: DetectorModel = {
    window: WINDOW,
    cell: HOG_DEFAULT.cell,
    bins: HOG_DEFAULT.bins,
    block: HOG_DEFAULT.block,
    weights: Array.from(trained.weights),
    bias: trained.bias,
    threshold,
    meanShape,
    trainedOn: "synthetic-renders-v1",
  };

  // smoke-check the full detector path before writing anything
  let ok = true;
  const check = (label: string, dets: Detection[], want: number) => {
    if (dets.length !== want) {
      ok = false;
      const boxes = dets
        .map((d) => `(${d.x.toFixed(0)},${d.y.toFixed(0)} ${d.w.toFixed(0)}px s=${d.score.toFixed(2)})`)
        .join(" ");
      console.error(`self-test ${label}: got ${dets.length} detections, want ${want} ${boxes}`);
    }
  };
  for (let i = 0; i < 10; i++) {
    check(`face scene ${i}`, detectFaces(renderFaceScene(rand).img, model), 1);
  }
  check("blank", detectFaces(newGray(96, 96, 128), model), 0);
  for (let i = 0; i < 5; i++) {
    check(`thumbnail x4 #${i}`, detectFaces(renderThumbScene(rand).img, model), 1);
  }
  if (!ok) {
    console.error("self-test failed; model not written");
    process.exit(1);
  }

  const out = path.resolve(__dirname, "..", "..", "model", "model.json");
  mkdirSync(path.dirname(out), { recursive: true });
  writeFileSync(out, JSON.stringify(model) + "\n", "utf-8");
  console.log(`wrote ${out}`);
}

main();
