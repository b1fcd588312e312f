#!/usr/bin/env node
import { Command, InvalidArgumentError } from "commander";
import * as path from "node:path";
import { loadModel } from "./detect";
import { extractLandmarks } from "./extract";
import { formatSummary } from "./sidecar";

const DEFAULT_MODEL = path.resolve(__dirname, "..", "..", "model", "model.json");

function parsePositiveInt(value: string): number {
  const n = Number(value);
  if (!Number.isInteger(n) || n < 1) {
    throw new InvalidArgumentError("must be an integer >= 1");
  }
  return n;
}

export function buildProgram(): Command {
  const program = new Command("extract");
  program
    .description("Detect one face per image and write a 68-point landmark sidecar")
    .requiredOption("--input <path>", "directory of PNGs, or a FER+ pixels CSV")
    .requiredOption("--output <path>", "sidecar .jsonl to write")
    .option("--upscale <n>", "integer pre-detection upscale factor", parsePositiveInt)
    .option("--model <path>", "detector model JSON", DEFAULT_MODEL)
    .action((opts) => {
      const model = loadModel(opts.model);
      const summary = extractLandmarks(
        { input: opts.input, output: opts.output, upscale: opts.upscale },
        model,
      );
      process.stdout.write(formatSummary(summary) + "\n");
    });
  return program;
}

function main(): void {
  try {
    buildProgram().parse(process.argv);
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    process.exitCode = 1;
  }
}

if (require.main === module) {
  main();
}
