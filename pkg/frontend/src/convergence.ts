import { Table, column, rawExtrema } from "./csv.js";
import { axes, el, frame, logScale, linearScale, polyline, svgDocument, ticks, formatTick } from "./svg.js";

/**
 * Solver convergence: residual and energy gap (distance above the final
 * energy) against iteration count, on a logarithmic vertical axis. Exact
 * zeros cannot sit on a log axis and are clipped to the smallest positive
 * value present.
 */

const WIDTH = 640;
const HEIGHT = 400;

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)); e++) {
    out.push(Math.pow(10, e));
  }
  if (out.length === 0) out.push(lo);
  if (out.length > 8) {
    const step = Math.ceil(out.length / 8);
    return out.filter((_, i) => i % step === 0);
  }
  return out;
}

export function renderConvergence(table: Table): string {
  const iters = column(table, "iter");
  const residual = column(table, "residual");
  const energy = column(table, "energy");
  const eFinal = energy[energy.length - 1];
  const gaps = energy.map((e) => Math.abs(e - eFinal));

  const positives = [...residual, ...gaps].filter((v) => v > 0);
  const floor = positives.length > 0 ? Math.min(...positives) : 1e-16;
  const ceil = positives.length > 0 ? Math.max(...positives) : 1;
  const clip = (v: number) => (v > 0 ? v : floor);

  const f = frame(WIDTH, HEIGHT);
  const x = linearScale(Math.min(...iters), Math.max(...iters, Math.min(...iters) + 1), f.x0, f.x1);
  const y = logScale(floor / 2, ceil * 2, f.y0, f.y1);

  const parts: string[] = [];
  parts.push(
    ...axes(
      f,
      x,
      y,
      ticks(Math.min(...iters), Math.max(...iters, Math.min(...iters) + 1)),
      logTicks(floor, ceil),
      "iteration",
      "residual / energy gap",
      formatTick,
    ),
  );

  const single = iters.length === 1;
  for (const [name, values, color] of [
    ["residual", residual, "#1f77b4"],
    ["energy-gap", gaps, "#d62728"],
  ] as const) {
    const pts = iters.map((it, i): [number, number] => [x(it), y(clip(values[i]))]);
    if (single) {
      parts.push(
        el("circle", { cx: pts[0][0], cy: pts[0][1], r: 4, fill: color, class: `${name}-point` }),
      );
    } else {
      parts.push(
        polyline(pts, { stroke: color, "stroke-width": 1.5, class: `${name}-curve` }),
      );
    }
    parts.push(
      el(
        "text",
        { x: f.x1 - 4, y: f.y1 + 14 * (name === "residual" ? 1 : 2), "text-anchor": "end", "font-size": 11, fill: color },
        [],
        name,
      ),
    );
  }
  parts.push(el("text", { x: f.x0, y: 18, "font-size": 14 }, [], "solver convergence"));

  const extrema = rawExtrema(table, "residual");
  return svgDocument(
    WIDTH,
    HEIGHT,
    { "data-residual-min": extrema.min, "data-residual-max": extrema.max },
    parts,
  );
}
