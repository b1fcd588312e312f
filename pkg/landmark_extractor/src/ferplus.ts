import { readFileSync } from "node:fs";
import { GrayImage } from "./png";

export const FERPLUS_SIDE = 48;

export interface CsvImage {
  imageId: string;
  image: GrayImage;
}

/** Read a FER+ style pixels CSV: one 48x48 grayscale image per data row,
 * keyed `ferplus_<row index>` to line up with downstream manifests.
 *
 * Fields never contain commas or quotes (pixels are space-separated
 * integers), so a plain split is a safe parse here.
 */
export function readFerplusCsv(path: string): CsvImage[] {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new Error(`${path}: empty CSV`);
  const header = lines[0].split(",").map((c) => c.trim().toLowerCase());
  const pixelsCol = header.indexOf("pixels");
  if (pixelsCol < 0) throw new Error(`${path}: no "pixels" column`);

  const out: CsvImage[] = [];
  for (let idx = 0; idx < lines.length - 1; idx++) {
    const row = lines[idx + 1].split(",");
    const values = row[pixelsCol].trim().split(/\s+/);
    if (values.length !== FERPLUS_SIDE * FERPLUS_SIDE) {
      throw new Error(`${path}: row ${idx}: expected ${FERPLUS_SIDE * FERPLUS_SIDE} pixels, got ${values.length}`);
    }
    const data = new Uint8Array(values.length);
    for (let i = 0; i < values.length; i++) {
      const v = Number(values[i]);
      if (!Number.isInteger(v) || v < 0 || v > 255) {
        throw new Error(`${path}: row ${idx}: pixel ${i} out of range: ${values[i]}`);
      }
      data[i] = v;
    }
    out.push({
      imageId: `ferplus_${String(idx).padStart(8, "0")}`,
      image: { width: FERPLUS_SIDE, height: FERPLUS_SIDE, data },
    });
  }
  return out;
}
