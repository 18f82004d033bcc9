#!/usr/bin/env node
import { readCsv } from "../csv.js";
import { renderConvergence } from "../convergence.js";
import { runMain, writeFigure } from "../render.js";

await runMain(async () => {
  const args = process.argv.slice(2);
  if (args.length !== 2) {
    throw new Error("usage: plot-convergence <iterations.csv> <out.{svg,png}>");
  }
  const [input, output] = args;
  await writeFigure(renderConvergence(readCsv(input, "iterations")), output);
});
