/** Minimal SVG assembly: just enough structure for batch chart output. */

export type Attrs = Record<string, string | number>;

function attrText(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${String(v)}"`)
    .join("");
}

export function el(tag: string, attrs: Attrs, children: string[] = [], text?: string): string {
  const inner = text !== undefined ? escapeText(text) : children.join("");
  if (inner === "") {
    return `<${tag}${attrText(attrs)}/>`;
  }
  return `<${tag}${attrText(attrs)}>${inner}</${tag}>`;
}

export function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(width: number, height: number, attrs: Attrs, children: string[]): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      ...attrs,
    },
    children,
  );
}

export interface Scale {
  (value: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  return (v: number) => {
    if (span === 0) return (r0 + r1) / 2;
    return r0 + ((v - d0) / span) * (r1 - r0);
  };
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale needs positive domain bounds");
  }
  const inner = linearScale(Math.log10(d0), Math.log10(d1), r0, r1);
  return (v: number) => inner(Math.log10(v));
}

/** Round-numbered tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10((hi - lo) / count)));
  const err = ((hi - lo) / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * Math.abs(hi); v += s) {
    out.push(Math.abs(v) < s * 1e-9 ? 0 : v);
  }
  return out;
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const text = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  return el("polyline", { points: text, fill: "none", ...attrs });
}

const MARGIN = { top: 30, right: 20, bottom: 45, left: 70 };

export interface Frame {
  width: number;
  height: number;
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export function frame(width: number, height: number): Frame {
  return {
    width,
    height,
    x0: MARGIN.left,
    x1: width - MARGIN.right,
    y0: height - MARGIN.bottom,
    y1: MARGIN.top,
  };
}

export function axes(
  f: Frame,
  xScale: Scale,
  yScale: Scale,
  xTicks: number[],
  yTicks: number[],
  xLabel: string,
  yLabel: string,
  fmt: (v: number) => string = (v) => formatTick(v),
): string[] {
  const parts: string[] = [];
  parts.push(el("line", { x1: f.x0, y1: f.y0, x2: f.x1, y2: f.y0, stroke: "black" }));
  parts.push(el("line", { x1: f.x0, y1: f.y0, x2: f.x0, y2: f.y1, stroke: "black" }));
  for (const t of xTicks) {
    const x = xScale(t);
    parts.push(el("line", { x1: x, y1: f.y0, x2: x, y2: f.y0 + 5, stroke: "black" }));
    parts.push(
      el("text", { x, y: f.y0 + 18, "text-anchor": "middle", "font-size": 11 }, [], fmt(t)),
    );
  }
  for (const t of yTicks) {
    const y = yScale(t);
    parts.push(el("line", { x1: f.x0 - 5, y1: y, x2: f.x0, y2: y, stroke: "black" }));
    parts.push(
      el("text", { x: f.x0 - 8, y: y + 4, "text-anchor": "end", "font-size": 11 }, [], fmt(t)),
    );
  }
  parts.push(
    el(
      "text",
      { x: (f.x0 + f.x1) / 2, y: f.height - 8, "text-anchor": "middle", "font-size": 13 },
      [],
      xLabel,
    ),
  );
  parts.push(
    el(
      "text",
      {
        x: 16,
        y: (f.y0 + f.y1) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        transform: `rotate(-90 16 ${(f.y0 + f.y1) / 2})`,
      },
      [],
      yLabel,
    ),
  );
  return parts;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}
