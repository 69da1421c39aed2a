/**
 * The five figures: four cycle-ledger panels (A vs m, first-law residuals,
 * efficiencies, heats) and the engine-regime heatmap.
 *
 * Each takes parsed CSV data and returns a complete SVG document string.
 */
import type { CycleRecord, RegimeGrid } from "./csv.js";
import {
  DEFAULT_FRAME,
  Frame,
  MARKERS,
  SERIES_COLORS,
  axes,
  document,
  extent,
  fmtTick,
  legend,
  linearScale,
  marker,
  polyline,
  r,
} from "./svg.js";

export const LEDGER_FIGURES = ["A_vs_m", "firstlaw", "eta", "heats"] as const;
export type LedgerFigure = (typeof LEDGER_FIGURES)[number];

export interface Series {
  label: string;
  records: CycleRecord[];
}

interface Line {
  label: string;
  xs: number[];
  ys: number[];
}

function panel(
  lines: Line[], yLabel: string, title: string,
  yTickFormat: (v: number) => string = fmtTick,
): string {
  const frame: Frame = DEFAULT_FRAME;
  const allX = lines.flatMap((l) => l.xs);
  const allY = lines.flatMap((l) => l.ys);
  const [x0, x1] = extent(allX, 0.02);
  const [y0, y1] = extent(allY);
  const sx = linearScale(x0, x1, frame.margin.left, frame.width - frame.margin.right);
  const sy = linearScale(y0, y1, frame.height - frame.margin.bottom, frame.margin.top);
  const parts = [axes(frame, sx, sy, "cycle m", yLabel, title, yTickFormat)];
  lines.forEach((line, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length]!;
    const mk = MARKERS[i % MARKERS.length]!;
    parts.push(polyline(line.xs.map(sx), line.ys.map(sy), color));
    line.xs.forEach((x, k) => {
      parts.push(marker(mk, sx(x), sy(line.ys[k]!), color));
    });
  });
  parts.push(
    legend(frame, lines.map((l, i) => ({
      label: l.label,
      color: SERIES_COLORS[i % SERIES_COLORS.length]!,
    }))),
  );
  return document(frame, parts.join("\n"));
}

/** log10|v| with a floor so exact zeros stay plottable */
function log10abs(v: number): number {
  return Math.log10(Math.max(Math.abs(v), 1e-16));
}

export function ledgerFigure(kind: LedgerFigure, series: Series[]): string {
  if (series.length === 0) {
    throw new Error("at least one cycles.csv series is required");
  }
  switch (kind) {
    case "A_vs_m":
      return panel(
        series.map((s) => ({
          label: s.label,
          xs: s.records.map((c) => c.m),
          ys: s.records.map((c) => c.A),
        })),
        "A(m)", "Cycle-boundary coupling term",
      );
    case "firstlaw":
      return panel(
        series.flatMap((s) => [
          {
            label: `|F| ${s.label}`,
            xs: s.records.map((c) => c.m),
            ys: s.records.map((c) => log10abs(c.F)),
          },
          {
            label: `|F0| ${s.label}`,
            xs: s.records.map((c) => c.m),
            ys: s.records.map((c) => log10abs(c.F0)),
          },
        ]),
        "log10 |residual|", "First law: complete (F) vs incomplete (F0)",
      );
    case "eta": {
      const lines: Line[] = [];
      for (const s of series) {
        const defined = s.records.filter((c) => c.eta !== null);
        lines.push({
          label: `eta ${s.label}`,
          xs: defined.map((c) => c.m),
          ys: defined.map((c) => c.eta!),
        });
        const defined0 = s.records.filter((c) => c.eta0 !== null);
        lines.push({
          label: `eta0 ${s.label}`,
          xs: defined0.map((c) => c.m),
          ys: defined0.map((c) => c.eta0!),
        });
      }
      return panel(lines, "efficiency", "Efficiency per cycle");
    }
    case "heats":
      return panel(
        series.flatMap((s) => [
          {
            label: `Qh ${s.label}`,
            xs: s.records.map((c) => c.m),
            ys: s.records.map((c) => c.Qh),
          },
          {
            label: `Qc ${s.label}`,
            xs: s.records.map((c) => c.m),
            ys: s.records.map((c) => c.Qc),
          },
        ]),
        "Q(m)", "Integrated heats per cycle",
      );
  }
}

/** Blue (engine, W<0) to red (W>0) through white, symmetric about 0. */
function heatColor(v: number, vmax: number): string {
  const x = vmax > 0 ? Math.max(-1, Math.min(1, v / vmax)) : 0;
  const chan = (c: number) => Math.round(255 - c * Math.abs(x) * 175);
  return x < 0
    ? `rgb(${chan(1)},${chan(0.55)},255)`
    : `rgb(255,${chan(0.55)},${chan(1)})`;
}

export function regimeFigure(
  grid: RegimeGrid,
  operatingPoint: [number, number] | null = [2.0, 1.0],
): string {
  const frame: Frame = { ...DEFAULT_FRAME, width: 480, height: 440 };
  const { eps1Axis, eps2Axis, W_est } = grid;
  const sx = linearScale(
    eps1Axis[0]!, eps1Axis[eps1Axis.length - 1]!,
    frame.margin.left, frame.width - frame.margin.right,
  );
  const sy = linearScale(
    eps2Axis[0]!, eps2Axis[eps2Axis.length - 1]!,
    frame.height - frame.margin.bottom, frame.margin.top,
  );
  const vmax = Math.max(...W_est.flat().map(Math.abs));
  const cellW = eps1Axis.length > 1
    ? Math.abs(sx(eps1Axis[1]!) - sx(eps1Axis[0]!)) : 20;
  const cellH = eps2Axis.length > 1
    ? Math.abs(sy(eps2Axis[1]!) - sy(eps2Axis[0]!)) : 20;

  const parts: string[] = [];
  eps1Axis.forEach((e1, i) => {
    eps2Axis.forEach((e2, j) => {
      const x = sx(e1) - cellW / 2;
      const y = sy(e2) - cellH / 2;
      parts.push(
        `<rect x="${r(x)}" y="${r(y)}" width="${r(cellW)}" height="${r(cellH)}" ` +
        `fill="${heatColor(W_est[i]![j]!, vmax)}"/>`,
      );
    });
  });
  parts.push(axes(frame, sx, sy, "eps1", "eps2",
    "Engine region: limit-cycle work estimate"));
  if (operatingPoint) {
    const [p1, p2] = operatingPoint;
    const inX = p1 >= sx.domain[0] && p1 <= sx.domain[1];
    const inY = p2 >= sy.domain[0] && p2 <= sy.domain[1];
    if (inX && inY) {
      const x = sx(p1);
      const y = sy(p2);
      parts.push(
        `<g class="operating-point" stroke="white" stroke-width="2">` +
        `<line x1="${r(x - 6)}" y1="${r(y - 6)}" x2="${r(x + 6)}" y2="${r(y + 6)}"/>` +
        `<line x1="${r(x - 6)}" y1="${r(y + 6)}" x2="${r(x + 6)}" y2="${r(y - 6)}"/>` +
        `</g>`,
      );
    }
  }
  // legend: engine (blue) vs pump (red)
  const lx = frame.width - frame.margin.right - 130;
  const ly = frame.margin.top + 10;
  parts.push(
    `<rect x="${lx}" y="${ly}" width="12" height="12" fill="${heatColor(-vmax || -1, vmax || 1)}"/>` +
    `<text x="${lx + 18}" y="${ly + 10}" font-size="11">W_est &lt; 0 (engine)</text>` +
    `<rect x="${lx}" y="${ly + 18}" width="12" height="12" fill="${heatColor(vmax || 1, vmax || 1)}"/>` +
    `<text x="${lx + 18}" y="${ly + 28}" font-size="11">W_est &gt; 0</text>`,
  );
  return document(frame, parts.join("\n"));
}
