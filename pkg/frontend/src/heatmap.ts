import { Table, column, rawExtrema } from "./csv.js";
import { el, formatTick, svgDocument } from "./svg.js";

/**
 * Energy-surface heatmap over the two prescribed masses.
 *
 * Unconverged cells are hatched, and cells where the energy increases
 * relative to the neighbor below/left (a monotonicity violation up to the
 * solver tolerance) get a marker. The exact CSV strings of the energy
 * extrema ride along as data attributes.
 */

const CELL = 72;
const PAD = { left: 80, bottom: 60, top: 40, right: 140 };
const MONO_TOL = 2e-8;

function colorFor(value: number, lo: number, hi: number): string {
  // dark blue (most negative) to pale yellow (least negative)
  const t = hi === lo ? 0.5 : (value - lo) / (hi - lo);
  const r = Math.round(20 + t * 225);
  const g = Math.round(40 + t * 195);
  const b = Math.round(120 - t * 40);
  return `rgb(${r},${g},${b})`;
}

export function renderHeatmap(table: Table): string {
  const a1 = column(table, "a1");
  const a2 = column(table, "a2");
  const energy = column(table, "energy");
  const converged = column(table, "converged");

  const xs = [...new Set(a1)].sort((p, q) => p - q);
  const ys = [...new Set(a2)].sort((p, q) => p - q);
  const cell = new Map<string, { energy: number; converged: boolean }>();
  a1.forEach((v, idx) => {
    cell.set(`${v}|${a2[idx]}`, { energy: energy[idx], converged: converged[idx] !== 0 });
  });

  const lo = Math.min(...energy);
  const hi = Math.max(...energy);
  const width = PAD.left + CELL * xs.length + PAD.right;
  const height = PAD.top + CELL * ys.length + PAD.bottom;
  const parts: string[] = [];

  parts.push(
    el("defs", {}, [
      el("pattern", { id: "hatch", width: 6, height: 6, patternUnits: "userSpaceOnUse" }, [
        el("path", { d: "M0,6 L6,0", stroke: "grey", "stroke-width": 1 }),
      ]),
    ]),
  );

  xs.forEach((ax, i) => {
    ys.forEach((ay, j) => {
      const entry = cell.get(`${ax}|${ay}`);
      if (!entry) return;
      const x = PAD.left + i * CELL;
      const y = PAD.top + (ys.length - 1 - j) * CELL;
      parts.push(
        el("rect", {
          x,
          y,
          width: CELL,
          height: CELL,
          fill: colorFor(entry.energy, lo, hi),
          stroke: "white",
          class: "cell",
          "data-a1": ax,
          "data-a2": ay,
          "data-energy": entry.energy,
        }),
      );
      if (!entry.converged) {
        parts.push(
          el("rect", { x, y, width: CELL, height: CELL, fill: "url(#hatch)", class: "unconverged" }),
        );
      }
      // monotonicity overlay: mark a cell whose energy exceeds a neighbor
      // with smaller mass in either direction
      const below = j > 0 ? cell.get(`${ax}|${ys[j - 1]}`) : undefined;
      const left = i > 0 ? cell.get(`${xs[i - 1]}|${ay}`) : undefined;
      const violates =
        (below && entry.converged && below.converged && entry.energy > below.energy + MONO_TOL) ||
        (left && entry.converged && left.converged && entry.energy > left.energy + MONO_TOL);
      if (violates) {
        parts.push(
          el(
            "text",
            {
              x: x + CELL / 2,
              y: y + CELL / 2 + 6,
              "text-anchor": "middle",
              "font-size": 18,
              fill: "red",
              class: "violation",
            },
            [],
            "x",
          ),
        );
      }
      parts.push(
        el(
          "text",
          {
            x: x + CELL / 2,
            y: y + CELL - 6,
            "text-anchor": "middle",
            "font-size": 9,
            fill: "black",
          },
          [],
          formatTick(entry.energy),
        ),
      );
    });
  });

  xs.forEach((ax, i) => {
    parts.push(
      el(
        "text",
        {
          x: PAD.left + i * CELL + CELL / 2,
          y: PAD.top + CELL * ys.length + 18,
          "text-anchor": "middle",
          "font-size": 12,
        },
        [],
        String(ax),
      ),
    );
  });
  ys.forEach((ay, j) => {
    parts.push(
      el(
        "text",
        {
          x: PAD.left - 10,
          y: PAD.top + (ys.length - 1 - j) * CELL + CELL / 2 + 4,
          "text-anchor": "end",
          "font-size": 12,
        },
        [],
        String(ay),
      ),
    );
  });
  parts.push(
    el(
      "text",
      { x: PAD.left + (CELL * xs.length) / 2, y: height - 14, "text-anchor": "middle", "font-size": 13 },
      [],
      "first mass",
    ),
  );
  parts.push(
    el(
      "text",
      {
        x: 18,
        y: PAD.top + (CELL * ys.length) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        transform: `rotate(-90 18 ${PAD.top + (CELL * ys.length) / 2})`,
      },
      [],
      "second mass",
    ),
  );
  parts.push(
    el(
      "text",
      { x: PAD.left, y: 22, "font-size": 14 },
      [],
      "ground-state energy over the mass grid",
    ),
  );

  // color bar
  const barX = PAD.left + CELL * xs.length + 30;
  const barH = CELL * ys.length;
  for (let s = 0; s < 64; s++) {
    const v = hi - ((s + 0.5) / 64) * (hi - lo);
    parts.push(
      el("rect", {
        x: barX,
        y: PAD.top + (s * barH) / 64,
        width: 18,
        height: barH / 64 + 0.5,
        fill: colorFor(v, lo, hi),
      }),
    );
  }
  parts.push(
    el("text", { x: barX + 24, y: PAD.top + 10, "font-size": 11 }, [], formatTick(hi)),
  );
  parts.push(
    el("text", { x: barX + 24, y: PAD.top + barH, "font-size": 11 }, [], formatTick(lo)),
  );

  const extrema = rawExtrema(table, "energy");
  return svgDocument(
    width,
    height,
    { "data-energy-min": extrema.min, "data-energy-max": extrema.max },
    parts,
  );
}
