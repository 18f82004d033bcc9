import { readFileSync } from "node:fs";

/**
 * Strict reader for the solver's CSV files.
 *
 * Every file kind has a fixed header (schema version 1); anything else is
 * refused so figures can never be rendered from mislabeled data. Values are
 * kept as their original strings alongside the parsed numbers, so extrema
 * can be echoed into the figure without any reformatting loss.
 */

export const SCHEMA = {
  table: "a1,a2,energy,lambda1,lambda2,residual,converged",
  trace: "t,mass1,mass2,energy,orbit_distance",
  iterations: "iter,energy,residual,lambda1,lambda2",
  properties:
    "nonincreasing_ok,monotone_map_max_err,pnorm_rel_err_max,gradient_lhs," +
    "gradient_rhs,gradient_ok,hl_lhs,hl_rhs,hl_ok,resolution_warning",
} as const;

export type SchemaKind = keyof typeof SCHEMA;

export class CsvError extends Error {}

export interface Table {
  header: string[];
  /** raw cell strings, exactly as stored in the file */
  raw: string[][];
  /** numeric view of the same cells */
  rows: number[][];
}

export function readCsv(path: string, kind: SchemaKind): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError(`${path}: empty file`);
  }
  const expected = SCHEMA[kind];
  if (lines[0] !== expected) {
    throw new CsvError(
      `${path}: header does not match the ${kind} schema\n  got:      ${lines[0]}\n  expected: ${expected}`,
    );
  }
  const header = expected.split(",");
  if (lines.length === 1) {
    throw new CsvError(`${path}: no data rows`);
  }
  const raw: string[][] = [];
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `${path}: line ${i + 1}: expected ${header.length} fields, found ${cells.length}`,
      );
    }
    const nums = cells.map((cell, j) => {
      const v = Number(cell);
      if (cell.trim() === "" || Number.isNaN(v)) {
        throw new CsvError(`${path}: line ${i + 1}: bad numeric value '${cell}' in column ${header[j]}`);
      }
      return v;
    });
    raw.push(cells);
    rows.push(nums);
  }
  return { header, raw, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`no column named '${name}'`);
  }
  return table.rows.map((row) => row[idx]);
}

export function rawColumn(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`no column named '${name}'`);
  }
  return table.raw.map((row) => row[idx]);
}

/** Raw strings of the minimum and maximum of a column, untouched by reformatting. */
export function rawExtrema(table: Table, name: string): { min: string; max: string } {
  const nums = column(table, name);
  const raws = rawColumn(table, name);
  let lo = 0;
  let hi = 0;
  nums.forEach((v, i) => {
    if (v < nums[lo]) lo = i;
    if (v > nums[hi]) hi = i;
  });
  return { min: raws[lo], max: raws[hi] };
}
