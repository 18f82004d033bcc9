#!/usr/bin/env node
import { basename } from "node:path";
import { readCsv } from "../csv.js";
import { renderTrace } from "../trace.js";
import { runMain, writeFigure } from "../render.js";

await runMain(async () => {
  const args = process.argv.slice(2);
  if (args.length < 2) {
    throw new Error("usage: plot-trace <trace.csv> [more traces...] <out.{svg,png}>");
  }
  const output = args[args.length - 1];
  const inputs = args.slice(0, -1);
  const tables = inputs.map((path) => readCsv(path, "trace"));
  const labels = inputs.map((path) => basename(path, ".csv"));
  await writeFigure(renderTrace(tables, labels), output);
});
