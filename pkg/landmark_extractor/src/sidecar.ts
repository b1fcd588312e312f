import { writeFileSync } from "node:fs";
import { Point } from "./raster";
import { Detection } from "./detect";

export const DETECTOR_TAG = "hog-linear";

export interface SidecarRecord {
  imageId: string;
  box: Detection;
  points: Point[];
}

/** One JSON object per line; key order mirrors the consumer's serializer. */
export function recordToLine(rec: SidecarRecord): string {
  return JSON.stringify({
    image_id: rec.imageId,
    box: [rec.box.x, rec.box.y, rec.box.w, rec.box.h],
    points: rec.points.map(([x, y]) => [x, y]),
    detector: DETECTOR_TAG,
  });
}

export function writeSidecar(path: string, records: SidecarRecord[]): void {
  const sorted = [...records].sort((a, b) =>
    a.imageId < b.imageId ? -1 : a.imageId > b.imageId ? 1 : 0,
  );
  const body = sorted.map((r) => recordToLine(r) + "\n").join("");
  writeFileSync(path, body, "utf-8");
}

export interface ExtractionSummary {
  emitted: number;
  noDetection: string[];
  multipleDetections: string[];
  failed: { imageId: string; error: string }[];
}

export function emptySummary(): ExtractionSummary {
  return { emitted: 0, noDetection: [], multipleDetections: [], failed: [] };
}

export function formatSummary(s: ExtractionSummary): string {
  const lines = [`emitted: ${s.emitted}`];
  const listed = (label: string, ids: string[]) => {
    lines.push(ids.length ? `${label}: ${ids.length} (${ids.join(", ")})` : `${label}: 0`);
  };
  listed("no detection", s.noDetection);
  listed("multiple detections", s.multipleDetections);
  if (s.failed.length) {
    lines.push(`failed: ${s.failed.length}`);
    for (const f of s.failed) lines.push(`  ${f.imageId}: ${f.error}`);
  } else {
    lines.push("failed: 0");
  }
  return lines.join("\n");
}
