import { Table, column, rawExtrema } from "./csv.js";
import { axes, el, frame, linearScale, polyline, svgDocument, ticks } from "./svg.js";

/**
 * Stability traces: orbit distance against time on the left axis, with the
 * conserved quantities (masses, energy) as flat reference curves on a twin
 * right axis. Several traces overlay in input order, which callers arrange
 * to be ascending perturbation size.
 */

const WIDTH = 640;
const HEIGHT = 400;
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

export function renderTrace(tables: Table[], labels: string[]): string {
  if (tables.length === 0) {
    throw new Error("need at least one trace");
  }
  const f = frame(WIDTH, HEIGHT);
  const allT = tables.flatMap((t) => column(t, "t"));
  const allD = tables.flatMap((t) => column(t, "orbit_distance"));
  const t0 = Math.min(...allT);
  const t1 = Math.max(...allT);
  const dHi = Math.max(...allD, 1e-300);
  const x = linearScale(t0, t1, f.x0, f.x1);
  const y = linearScale(0, dHi * 1.05, f.y0, f.y1);

  const parts: string[] = [];
  parts.push(...axes(f, x, y, ticks(t0, t1), ticks(0, dHi * 1.05), "t", "orbit distance"));

  tables.forEach((table, k) => {
    const ts = column(table, "t");
    const ds = column(table, "orbit_distance");
    const pts = ts.map((tv, i): [number, number] => [x(tv), y(ds[i])]);
    parts.push(
      polyline(pts, {
        stroke: COLORS[k % COLORS.length],
        "stroke-width": 1.5,
        class: "distance-curve",
        "data-label": labels[k] ?? `trace ${k}`,
        "data-sup": Math.max(...ds),
      }),
    );
    parts.push(
      el(
        "text",
        {
          x: f.x1 - 4,
          y: f.y1 + 14 * (k + 1),
          "text-anchor": "end",
          "font-size": 11,
          fill: COLORS[k % COLORS.length],
        },
        [],
        labels[k] ?? `trace ${k}`,
      ),
    );
  });

  // conserved quantities of the first trace as relative drifts on the right
  const ref = tables[0];
  const tRef = column(ref, "t");
  for (const [name, dash] of [
    ["mass1", "4 2"],
    ["mass2", "1 3"],
    ["energy", "6 3"],
  ] as const) {
    const vals = column(ref, name);
    const base = vals[0];
    const drifts = vals.map((v) => Math.abs(v - base) / Math.max(Math.abs(base), 1e-300));
    const driftHi = Math.max(...drifts, 1e-15);
    const yr = linearScale(0, driftHi * 1.05, f.y0, f.y1);
    const pts = tRef.map((tv, i): [number, number] => [x(tv), yr(drifts[i])]);
    parts.push(
      polyline(pts, {
        stroke: "grey",
        "stroke-dasharray": dash,
        "stroke-width": 1,
        class: "conserved-curve",
        "data-quantity": name,
        "data-max-drift": driftHi,
      }),
    );
  }
  parts.push(
    el("text", { x: f.x0, y: 18, "font-size": 14 }, [], "distance to the minimizer orbit"),
  );

  const extrema = rawExtrema(tables[tables.length - 1], "orbit_distance");
  return svgDocument(
    WIDTH,
    HEIGHT,
    { "data-distance-min": extrema.min, "data-distance-max": extrema.max },
    parts,
  );
}
