import { Table, column, rawColumn, rawExtrema } from "./csv.js";
import { el, formatTick, svgDocument } from "./svg.js";

/**
 * Rearrangement property margins: paired bars for each inequality
 * (left-hand side next to its bound) plus the measured error magnitudes
 * of the exact identities, with pass/fail flags from the CSV.
 */

const WIDTH = 640;
const HEIGHT = 360;

export function renderMargins(table: Table): string {
  const row = table.rows[table.rows.length - 1];
  const get = (name: string) => row[table.header.indexOf(name)];

  const pairs = [
    { name: "gradient", lhs: get("gradient_lhs"), rhs: get("gradient_rhs"), ok: get("gradient_ok") !== 0 },
    { name: "rearranged product", lhs: get("hl_lhs"), rhs: get("hl_rhs"), ok: get("hl_ok") !== 0 },
  ];
  const errs = [
    { name: "monotone map", value: get("monotone_map_max_err") },
    { name: "p-norm additivity", value: get("pnorm_rel_err_max") },
  ];

  const parts: string[] = [];
  parts.push(el("text", { x: 30, y: 24, "font-size": 14 }, [], "rearrangement inequality margins"));

  const groupW = 150;
  const barW = 40;
  const baseY = 230;
  const maxVal = Math.max(...pairs.flatMap((p) => [p.lhs, p.rhs]), 1e-300);
  pairs.forEach((p, k) => {
    const x0 = 60 + k * (groupW + 60);
    const hL = (p.lhs / maxVal) * 160;
    const hR = (p.rhs / maxVal) * 160;
    parts.push(
      el("rect", {
        x: x0,
        y: baseY - hL,
        width: barW,
        height: Math.max(hL, 0.5),
        fill: "#1f77b4",
        class: "lhs-bar",
        "data-name": p.name,
        "data-value": p.lhs,
      }),
    );
    parts.push(
      el("rect", {
        x: x0 + barW + 10,
        y: baseY - hR,
        width: barW,
        height: Math.max(hR, 0.5),
        fill: "#ff7f0e",
        class: "rhs-bar",
        "data-name": p.name,
        "data-value": p.rhs,
      }),
    );
    parts.push(
      el("text", { x: x0 + barW + 5, y: baseY + 18, "text-anchor": "middle", "font-size": 12 }, [], p.name),
    );
    parts.push(
      el(
        "text",
        {
          x: x0 + barW + 5,
          y: baseY + 34,
          "text-anchor": "middle",
          "font-size": 11,
          fill: p.ok ? "green" : "red",
          class: "flag",
        },
        [],
        p.ok ? "holds" : "violated",
      ),
    );
    parts.push(
      el("text", { x: x0 + barW / 2, y: baseY - hL - 4, "text-anchor": "middle", "font-size": 10 }, [], formatTick(p.lhs)),
    );
    parts.push(
      el("text", { x: x0 + barW * 1.5 + 10, y: baseY - hR - 4, "text-anchor": "middle", "font-size": 10 }, [], formatTick(p.rhs)),
    );
  });

  errs.forEach((e, k) => {
    const y = 290 + k * 22;
    parts.push(
      el(
        "text",
        { x: 60, y, "font-size": 12, class: "identity-error", "data-name": e.name, "data-value": e.value },
        [],
        `${e.name} max error: ${formatTick(e.value)}`,
      ),
    );
  });
  const flags = [
    { name: "nonincreasing", ok: get("nonincreasing_ok") !== 0 },
    { name: "resolution", ok: get("resolution_warning") === 0 },
  ];
  flags.forEach((fl, k) => {
    const y = 290 + k * 22;
    parts.push(
      el(
        "text",
        { x: 380, y, "font-size": 12, fill: fl.ok ? "green" : "red" },
        [],
        `${fl.name}: ${fl.ok ? "ok" : "flagged"}`,
      ),
    );
  });

  const extrema = rawExtrema(table, "gradient_lhs");
  const rhsRaw = rawColumn(table, "gradient_rhs")[table.raw.length - 1];
  return svgDocument(
    WIDTH,
    HEIGHT,
    {
      "data-gradient-lhs-min": extrema.min,
      "data-gradient-lhs-max": extrema.max,
      "data-gradient-rhs": rhsRaw,
    },
    parts,
  );
}
