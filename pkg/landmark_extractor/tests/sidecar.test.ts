import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { afterAll, describe, expect, it } from "vitest";
import { Detection } from "../src/detect";
import { Point } from "../src/raster";
import {
  SidecarRecord,
  emptySummary,
  formatSummary,
  recordToLine,
  writeSidecar,
} from "../src/sidecar";

const tmp = mkdtempSync(path.join(tmpdir(), "lmx-sidecar-"));
afterAll(() => rmSync(tmp, { recursive: true, force: true }));

function record(id: string): SidecarRecord {
  const box: Detection = { x: 4, y: 5, w: 60, h: 60, score: 2.5 };
  const points: Point[] = [];
  for (let i = 0; i < 68; i++) points.push([4 + i * 0.5, 5 + i * 0.25]);
  return { imageId: id, box, points };
}

describe("sidecar lines", () => {
  it("emits one parseable object with the agreed keys", () => {
    const obj = JSON.parse(recordToLine(record("img_0")));
    expect(Object.keys(obj)).toEqual(["image_id", "box", "points", "detector"]);
    expect(obj.image_id).toBe("img_0");
    expect(obj.box).toEqual([4, 5, 60, 60]);
    expect(obj.points).toHaveLength(68);
    expect(obj.points[3]).toEqual([4 + 1.5, 5 + 0.75]);
    expect(obj.detector).toBe("hog-linear");
  });

  it("writes records sorted by image id", () => {
    const file = path.join(tmp, "sorted.jsonl");
    writeSidecar(file, [record("zz"), record("aa"), record("mm")]);
    const ids = readFileSync(file, "utf-8")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line).image_id);
    expect(ids).toEqual(["aa", "mm", "zz"]);
  });
});

describe("summary text", () => {
  it("lists omitted ids and failures", () => {
    const s = emptySummary();
    s.emitted = 7;
    s.noDetection = ["blank_0", "blank_1"];
    s.multipleDetections = ["crowd_0"];
    s.failed = [{ imageId: "bad_0", error: "unreadable PNG" }];
    const text = formatSummary(s);
    expect(text).toContain("emitted: 7");
    expect(text).toContain("no detection: 2 (blank_0, blank_1)");
    expect(text).toContain("multiple detections: 1 (crowd_0)");
    expect(text).toContain("failed: 1");
    expect(text).toContain("bad_0: unreadable PNG");
  });

  it("renders zero counts without id lists", () => {
    const text = formatSummary(emptySummary());
    expect(text).toBe("emitted: 0\nno detection: 0\nmultiple detections: 0\nfailed: 0");
  });
});
