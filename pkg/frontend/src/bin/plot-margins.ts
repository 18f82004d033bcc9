#!/usr/bin/env node
import { readCsv } from "../csv.js";
import { renderMargins } from "../margins.js";
import { runMain, writeFigure } from "../render.js";

await runMain(async () => {
  const args = process.argv.slice(2);
  if (args.length !== 2) {
    throw new Error("usage: plot-margins <properties.csv> <out.{svg,png}>");
  }
  const [input, output] = args;
  await writeFigure(renderMargins(readCsv(input, "properties")), output);
});
