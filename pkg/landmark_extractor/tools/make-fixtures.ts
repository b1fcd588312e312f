/** Render the bundled synthetic frontal fixtures (fixtures/renders/).
 *
 * Seeded; rerunning reproduces the same PNGs byte for byte.
 */
import { mkdirSync } from "node:fs";
import * as path from "node:path";
import { writeGray } from "../src/png";
import { mulberry32, uniform } from "../src/rng";
import { placeTemplate, renderFace } from "../src/template";

const SIDE = 96;
const SHAPE_Y_MID = 0.285;

function main(): void {
  const rand = mulberry32(0xf1de);
  const outDir = path.resolve(__dirname, "..", "..", "fixtures", "renders");
  mkdirSync(outDir, { recursive: true });
  for (let i = 0; i < 10; i++) {
    const sigma = uniform(rand, 26, 33);
    const cx = SIDE / 2 + uniform(rand, -3, 3);
    const cy = SIDE / 2 + uniform(rand, -3, 3);
    const pts = placeTemplate({
      center: [cx, cy - SHAPE_Y_MID * sigma],
      scale: sigma,
      roll: uniform(rand, -0.04, 0.04),
    });
    const img = renderFace(pts, SIDE, uniform(rand, 0, 3), rand);
    const file = path.join(outDir, `render_${String(i).padStart(2, "0")}.png`);
    writeGray(img, file);
    console.log(`wrote ${file}`);
  }
}

main();
