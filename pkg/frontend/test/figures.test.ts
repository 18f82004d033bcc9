import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CsvError, readCsv, rawExtrema } from "../src/csv.js";
import { renderConvergence } from "../src/convergence.js";
import { renderHeatmap } from "../src/heatmap.js";
import { renderMargins } from "../src/margins.js";
import { renderTrace } from "../src/trace.js";
import { writeFigure } from "../src/render.js";

const FIX = join(__dirname, "fixtures");

function attr(svg: string, name: string): string {
  const m = svg.match(new RegExp(`${name}="([^"]*)"`));
  if (!m) throw new Error(`attribute ${name} not found`);
  return m[1];
}

function scratch(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

describe("csv reader", () => {
  it("loads a known-good table", () => {
    const t = readCsv(join(FIX, "table.csv"), "table");
    expect(t.rows).toHaveLength(9);
    expect(t.header[0]).toBe("a1");
  });

  it("refuses a mismatched header", () => {
    const dir = scratch();
    const path = join(dir, "bad.csv");
    writeFileSync(path, "a1,a2,energy\n0,0,0\n");
    expect(() => readCsv(path, "table")).toThrow(CsvError);
    expect(() => readCsv(path, "table")).toThrow(/header/);
  });

  it("refuses an empty table", () => {
    const dir = scratch();
    const path = join(dir, "empty.csv");
    writeFileSync(path, "a1,a2,energy,lambda1,lambda2,residual,converged\n");
    expect(() => readCsv(path, "table")).toThrow(/no data rows/);
  });

  it("names the line of a corrupted row", () => {
    const dir = scratch();
    const path = join(dir, "corrupt.csv");
    writeFileSync(
      path,
      "iter,energy,residual,lambda1,lambda2\n0,-0.1,0.5,-0.2,-0.2\n1,-0.1,oops,-0.2,-0.2\n",
    );
    expect(() => readCsv(path, "iterations")).toThrow(/line 3/);
  });

  it("rejects ragged rows with the line number", () => {
    const dir = scratch();
    const path = join(dir, "ragged.csv");
    writeFileSync(path, "t,mass1,mass2,energy,orbit_distance\n0,1,1\n");
    expect(() => readCsv(path, "trace")).toThrow(/line 2/);
  });
});

describe("heatmap", () => {
  const table = readCsv(join(FIX, "table.csv"), "table");
  const svg = renderHeatmap(table);

  it("draws one cell per mass point", () => {
    expect(svg.match(/class="cell"/g)).toHaveLength(9);
  });

  it("color range covers only nonpositive energies", () => {
    expect(Number(attr(svg, "data-energy-max"))).toBeLessThanOrEqual(0);
    expect(Number(attr(svg, "data-energy-min"))).toBeLessThan(0);
  });

  it("embeds the exact CSV extrema", () => {
    const extrema = rawExtrema(table, "energy");
    expect(attr(svg, "data-energy-min")).toBe(extrema.min);
    expect(attr(svg, "data-energy-max")).toBe(extrema.max);
  });

  it("marks no monotonicity violations on the benchmark table", () => {
    expect(svg).not.toContain('class="violation"');
  });

  it("hatches unconverged cells", () => {
    const doctored: typeof table = {
      header: table.header,
      raw: table.raw.map((row) => [...row.slice(0, 6), "0"]),
      rows: table.rows.map((row) => [...row.slice(0, 6), 0]),
    };
    const out = renderHeatmap(doctored);
    expect(out.match(/class="unconverged"/g)).toHaveLength(9);
  });
});

describe("trace", () => {
  const flat = readCsv(join(FIX, "trace_0.csv"), "trace");
  const kicked = readCsv(join(FIX, "trace_1.csv"), "trace");
  const svg = renderTrace([flat, kicked], ["delta=0", "delta=0.01"]);

  it("unperturbed run stays near zero", () => {
    const sups = [...svg.matchAll(/data-sup="([^"]*)"/g)].map((m) => Number(m[1]));
    expect(sups[0]).toBeLessThan(1e-4);
  });

  it("overlay is ordered by perturbation size", () => {
    const sups = [...svg.matchAll(/data-sup="([^"]*)"/g)].map((m) => Number(m[1]));
    expect(sups).toHaveLength(2);
    expect(sups[0]).toBeLessThanOrEqual(sups[1]);
  });

  it("conserved quantities are flat to plot resolution", () => {
    const drifts = [...svg.matchAll(/data-max-drift="([^"]*)"/g)].map((m) => Number(m[1]));
    expect(drifts).toHaveLength(3);
    for (const d of drifts) {
      expect(d).toBeLessThan(1e-9);
    }
  });

  it("embeds the exact CSV extrema of the last trace", () => {
    const extrema = rawExtrema(kicked, "orbit_distance");
    expect(attr(svg, "data-distance-min")).toBe(extrema.min);
    expect(attr(svg, "data-distance-max")).toBe(extrema.max);
  });
});

describe("convergence", () => {
  const table = readCsv(join(FIX, "iterations.csv"), "iterations");
  const svg = renderConvergence(table);

  it("residual curve ends far below its start", () => {
    const residual = table.rows.map((r) => r[table.header.indexOf("residual")]);
    expect(residual[residual.length - 1]).toBeLessThan(1e-6 * residual[0]);
    const tail = residual.slice(Math.floor(residual.length / 2));
    for (let i = 1; i < tail.length; i++) {
      expect(tail[i]).toBeLessThanOrEqual(tail[i - 1]);
    }
    expect(svg).toContain('class="residual-curve"');
  });

  it("single-row file becomes a single-point plot", () => {
    const dir = scratch();
    const path = join(dir, "one.csv");
    writeFileSync(path, "iter,energy,residual,lambda1,lambda2\n0,-0.1,0.5,-0.2,-0.2\n");
    const out = renderConvergence(readCsv(path, "iterations"));
    expect(out).toContain('class="residual-point"');
    expect(out).not.toContain("polyline");
  });

  it("embeds the exact CSV extrema", () => {
    const extrema = rawExtrema(table, "residual");
    expect(attr(svg, "data-residual-min")).toBe(extrema.min);
    expect(attr(svg, "data-residual-max")).toBe(extrema.max);
  });
});

describe("margins", () => {
  const table = readCsv(join(FIX, "properties.csv"), "properties");
  const svg = renderMargins(table);

  it("shows both inequality pairs with their flags", () => {
    expect(svg.match(/class="lhs-bar"/g)).toHaveLength(2);
    expect(svg.match(/class="rhs-bar"/g)).toHaveLength(2);
    expect(svg.match(/>holds</g)).toHaveLength(2);
  });

  it("embeds the exact CSV values", () => {
    const extrema = rawExtrema(table, "gradient_lhs");
    expect(attr(svg, "data-gradient-lhs-min")).toBe(extrema.min);
    expect(attr(svg, "data-gradient-lhs-max")).toBe(extrema.max);
  });
});

describe("output formats", () => {
  it("writes svg and png", async () => {
    const dir = scratch();
    const table = readCsv(join(FIX, "table.csv"), "table");
    const svg = renderHeatmap(table);
    const svgPath = join(dir, "fig.svg");
    const pngPath = join(dir, "fig.png");
    await writeFigure(svg, svgPath);
    await writeFigure(svg, pngPath);
    expect(readFileSync(svgPath, "utf-8")).toContain("<svg");
    const png = readFileSync(pngPath);
    expect(png.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    );
  });

  it("rejects unknown extensions", async () => {
    await expect(writeFigure("<svg/>", join(scratch(), "fig.bmp"))).rejects.toThrow(/format/);
  });
});
