/**
 * Minimal deterministic SVG builder: linear scales, axes, series markers.
 *
 * Everything is rendered from the input data alone (no timestamps, no
 * random ids), so the same CSV always produces byte-identical output.
 */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = [d0, d1];
  f.range = [r0, r1];
  return f;
}

/** Fixed-precision coordinate, avoiding "-0.00". */
export function r(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function extent(values: number[], pad = 0.05): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const p = (hi - lo) * pad;
  return [lo - p, hi + p];
}

export function ticks(lo: number, hi: number, n = 5): number[] {
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n)!;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
    out.push(Math.abs(v) < step / 1e6 ? 0 : v);
  }
  return out;
}

export function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0);
  }
  return parseFloat(v.toPrecision(6)).toString();
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

export const MARKERS = ["circle", "square", "diamond", "triangle"] as const;
export type Marker = (typeof MARKERS)[number];

export function marker(kind: Marker, x: number, y: number, color: string, size = 3): string {
  switch (kind) {
    case "circle":
      return `<circle cx="${r(x)}" cy="${r(y)}" r="${size}" fill="${color}"/>`;
    case "square":
      return `<rect x="${r(x - size)}" y="${r(y - size)}" width="${2 * size}" height="${2 * size}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M${r(x)} ${r(y - size * 1.3)}L${r(x + size * 1.3)} ${r(y)}L${r(x)} ${r(y + size * 1.3)}L${r(x - size * 1.3)} ${r(y)}Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M${r(x)} ${r(y - size * 1.2)}L${r(x + size * 1.2)} ${r(y + size)}L${r(x - size * 1.2)} ${r(y + size)}Z" fill="${color}"/>`;
  }
}

export function polyline(xs: number[], ys: number[], color: string, width = 1.5): string {
  const pts = xs.map((x, i) => `${r(x)},${r(ys[i]!)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"/>`;
}

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 520,
  height: 360,
  margin: { top: 36, right: 16, bottom: 44, left: 64 },
};

export function axes(
  frame: Frame, sx: Scale, sy: Scale,
  xLabel: string, yLabel: string, title: string,
  yTickFormat: (v: number) => string = fmtTick,
): string {
  const { width, height, margin } = frame;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  const parts: string[] = [];
  for (const t of ticks(sx.domain[0], sx.domain[1])) {
    const x = sx(t);
    parts.push(`<line x1="${r(x)}" y1="${y0}" x2="${r(x)}" y2="${y1}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${r(x)}" y="${y0 + 16}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`);
  }
  for (const t of ticks(sy.domain[0], sy.domain[1])) {
    const y = sy(t);
    parts.push(`<line x1="${x0}" y1="${r(y)}" x2="${x1}" y2="${r(y)}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${x0 - 6}" y="${r(y + 4)}" text-anchor="end" font-size="11">${yTickFormat(t)}</text>`);
  }
  parts.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333"/>`);
  parts.push(`<text x="${(x0 + x1) / 2}" y="${height - 8}" text-anchor="middle" font-size="12">${xLabel}</text>`);
  parts.push(`<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 ${(y0 + y1) / 2})">${yLabel}</text>`);
  parts.push(`<text x="${(x0 + x1) / 2}" y="20" text-anchor="middle" font-size="13" font-weight="bold">${title}</text>`);
  return parts.join("\n");
}

export function legend(frame: Frame, entries: { label: string; color: string }[]): string {
  const x = frame.margin.left + 10;
  return entries
    .map((e, i) => {
      const y = frame.margin.top + 14 + i * 16;
      return (
        `<line x1="${x}" y1="${y - 4}" x2="${x + 18}" y2="${y - 4}" stroke="${e.color}" stroke-width="2"/>` +
        `<text x="${x + 24}" y="${y}" font-size="11">${e.label}</text>`
      );
    })
    .join("\n");
}

export function document(frame: Frame, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" ` +
    `viewBox="0 0 ${frame.width} ${frame.height}" font-family="Helvetica,Arial,sans-serif">\n` +
    `<rect width="${frame.width}" height="${frame.height}" fill="white"/>\n` +
    body +
    `\n</svg>\n`
  );
}
