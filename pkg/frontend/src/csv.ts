/**
 * Readers for the simulator's documented CSV outputs.
 *
 * Strict by design: headers must match the published schemas exactly and
 * every cell must parse, so a schema drift upstream fails loudly here
 * instead of producing a silently wrong figure.
 */

export interface CycleRecord {
  m: number;
  W: number;
  Qh: number;
  Qc: number;
  A: number;
  F: number;
  F0: number;
  eta: number | null;
  eta0: number | null;
  dS: number;
  Sigma: number;
}

export interface RegimePoint {
  eps1: number;
  eps2: number;
  W_est: number;
}

export interface RegimeGrid {
  eps1Axis: number[];
  eps2Axis: number[];
  /** W_est[i][j] for eps1Axis[i], eps2Axis[j] */
  W_est: number[][];
}

export const CYCLE_COLUMNS = [
  "m", "W", "Qh", "Qc", "A", "F", "F0", "eta", "eta0", "dS", "Sigma",
] as const;

export const REGIME_COLUMNS = ["eps1", "eps2", "W_est"] as const;

export class CsvSchemaError extends Error {}

function splitCsv(text: string, path: string): string[][] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError(`${path}: file is empty`);
  }
  return lines.map((l) => l.split(","));
}

function checkHeader(
  got: string[], want: readonly string[], path: string,
): void {
  for (const col of want) {
    if (!got.includes(col)) {
      throw new CsvSchemaError(`${path}: missing column "${col}"`);
    }
  }
  if (got.length !== want.length || want.some((c, i) => got[i] !== c)) {
    throw new CsvSchemaError(
      `${path}: header [${got.join(",")}] does not match [${want.join(",")}]`,
    );
  }
}

function num(cell: string, path: string, row: number, col: string): number {
  const v = Number(cell);
  if (cell === "" || !Number.isFinite(v)) {
    throw new CsvSchemaError(
      `${path}: row ${row}, column "${col}": cannot parse "${cell}"`,
    );
  }
  return v;
}

function optional(
  cell: string, path: string, row: number, col: string,
): number | null {
  return cell === "" ? null : num(cell, path, row, col);
}

export function parseCycleCsv(text: string, path = "cycles.csv"): CycleRecord[] {
  const rows = splitCsv(text, path);
  checkHeader(rows[0]!, CYCLE_COLUMNS, path);
  if (rows.length === 1) {
    throw new CsvSchemaError(`${path}: no data rows`);
  }
  return rows.slice(1).map((cells, i) => {
    if (cells.length !== CYCLE_COLUMNS.length) {
      throw new CsvSchemaError(
        `${path}: row ${i + 1} has ${cells.length} cells, expected ${CYCLE_COLUMNS.length}`,
      );
    }
    const at = (j: number) => cells[j]!;
    return {
      m: num(at(0), path, i + 1, "m"),
      W: num(at(1), path, i + 1, "W"),
      Qh: num(at(2), path, i + 1, "Qh"),
      Qc: num(at(3), path, i + 1, "Qc"),
      A: num(at(4), path, i + 1, "A"),
      F: num(at(5), path, i + 1, "F"),
      F0: num(at(6), path, i + 1, "F0"),
      eta: optional(at(7), path, i + 1, "eta"),
      eta0: optional(at(8), path, i + 1, "eta0"),
      dS: num(at(9), path, i + 1, "dS"),
      Sigma: num(at(10), path, i + 1, "Sigma"),
    };
  });
}

export function parseRegimeCsv(text: string, path = "regime.csv"): RegimeGrid {
  const rows = splitCsv(text, path);
  checkHeader(rows[0]!, REGIME_COLUMNS, path);
  if (rows.length === 1) {
    throw new CsvSchemaError(`${path}: no data rows`);
  }
  const points: RegimePoint[] = rows.slice(1).map((cells, i) => {
    if (cells.length !== REGIME_COLUMNS.length) {
      throw new CsvSchemaError(
        `${path}: row ${i + 1} has ${cells.length} cells, expected ${REGIME_COLUMNS.length}`,
      );
    }
    return {
      eps1: num(cells[0]!, path, i + 1, "eps1"),
      eps2: num(cells[1]!, path, i + 1, "eps2"),
      W_est: num(cells[2]!, path, i + 1, "W_est"),
    };
  });

  const eps1Axis = [...new Set(points.map((p) => p.eps1))].sort((a, b) => a - b);
  const eps2Axis = [...new Set(points.map((p) => p.eps2))].sort((a, b) => a - b);
  if (points.length !== eps1Axis.length * eps2Axis.length) {
    throw new CsvSchemaError(
      `${path}: ${points.length} rows do not form a ` +
      `${eps1Axis.length} x ${eps2Axis.length} grid`,
    );
  }
  const W_est = eps1Axis.map(() => new Array<number>(eps2Axis.length).fill(NaN));
  for (const p of points) {
    const i = eps1Axis.indexOf(p.eps1);
    const j = eps2Axis.indexOf(p.eps2);
    if (!Number.isNaN(W_est[i]![j]!)) {
      throw new CsvSchemaError(
        `${path}: duplicate grid point (${p.eps1}, ${p.eps2})`,
      );
    }
    W_est[i]![j] = p.W_est;
  }
  return { eps1Axis, eps2Axis, W_est };
}
