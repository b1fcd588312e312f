import { readdirSync, statSync } from "node:fs";
import * as path from "node:path";
import { DetectorModel, detectSingleFace, shapeForBox } from "./detect";
import { CsvImage, readFerplusCsv } from "./ferplus";
import { GrayImage, readGray, upscaleNearest } from "./png";
import {
  ExtractionSummary,
  SidecarRecord,
  emptySummary,
  writeSidecar,
} from "./sidecar";

export interface ExtractionJob {
  input: string; // directory of PNGs, or a FER+ pixels CSV
  output: string; // sidecar path to write
  upscale?: number; // omit to pick per image
}

// Detector windows are 64 px; anything smaller than that has to be blown up
// before it can score at all. x4 turns 48 px thumbnails into 192 px.
export const AUTO_UPSCALE = 4;
export const AUTO_UPSCALE_BELOW = 64;

export function effectiveUpscale(img: GrayImage, requested?: number): number {
  if (requested !== undefined) {
    if (!Number.isInteger(requested) || requested < 1) {
      throw new Error(`upscale must be an integer >= 1, got ${requested}`);
    }
    return requested;
  }
  return Math.min(img.width, img.height) < AUTO_UPSCALE_BELOW ? AUTO_UPSCALE : 1;
}

interface PendingImage {
  imageId: string;
  load: () => GrayImage;
}

// image decoding is deferred so one bad file stays a per-image failure
function loadInputs(input: string): PendingImage[] {
  const st = statSync(input);
  if (st.isDirectory()) {
    const names = readdirSync(input)
      .filter((n) => n.toLowerCase().endsWith(".png"))
      .sort();
    return names.map((n) => ({
      imageId: n.slice(0, -".png".length),
      load: () => readGray(path.join(input, n)),
    }));
  }
  if (input.toLowerCase().endsWith(".csv")) {
    return readFerplusCsv(input).map(({ imageId, image }: CsvImage) => ({
      imageId,
      load: () => image,
    }));
  }
  throw new Error(`input must be a directory of PNGs or a .csv file: ${input}`);
}

/** Run detection over every input image and write the sidecar.
 *
 * Per-image problems (unreadable file, zero or multiple detections) become
 * summary entries; only unusable inputs or an unwritable output abort.
 */
export function extractLandmarks(job: ExtractionJob, model: DetectorModel): ExtractionSummary {
  const inputs = loadInputs(job.input);
  const summary = emptySummary();
  const records: SidecarRecord[] = [];

  for (const { imageId, load } of inputs) {
    try {
      const image = load();
      const factor = effectiveUpscale(image, job.upscale);
      const up = upscaleNearest(image, factor);
      const found = detectSingleFace(up, model);
      if (found.kind === "none") {
        summary.noDetection.push(imageId);
        continue;
      }
      if (found.kind === "multiple") {
        summary.multipleDetections.push(imageId);
        continue;
      }
      // report in the native frame of the stored image
      const box = {
        x: found.box.x / factor,
        y: found.box.y / factor,
        w: found.box.w / factor,
        h: found.box.h / factor,
        score: found.box.score,
      };
      records.push({ imageId, box, points: shapeForBox(box, model) });
    } catch (err) {
      summary.failed.push({ imageId, error: err instanceof Error ? err.message : String(err) });
    }
  }

  writeSidecar(job.output, records);
  summary.emitted = records.length;
  return summary;
}
