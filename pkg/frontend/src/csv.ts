import { readFileSync } from 'fs';
import { parse } from 'papaparse';

export type FigureKind = 'decay' | 'histogram' | 'rho-vs-r' | 'rho-vs-lambda';

export interface IterRow {
  mode: string;
  r: number;
  k: number;
  lambda: number;
  seed: number | null;
  iter: number | null;
  h1_error: number | null;
  rel_error: number | null;
  rho: number | null;
  converged: string;
  wall_ms: number;
}

const REQUIRED_COLUMNS: Record<FigureKind, string[]> = {
  decay: ['mode', 'r', 'lambda', 'seed', 'iter', 'rel_error'],
  histogram: ['mode', 'r', 'lambda', 'seed', 'rho'],
  'rho-vs-r': ['mode', 'r', 'lambda', 'seed', 'rho'],
  'rho-vs-lambda': ['mode', 'r', 'lambda', 'seed', 'rho'],
};

function toNumber(value: unknown): number | null {
  if (value === null || value === undefined || value === '') {
    return null;
  }
  const num = Number(value);
  return Number.isFinite(num) ? num : null;
}

/** Parse an experiments CSV and validate the columns the kind needs. */
export function readIterCsv(path: string, kind: FigureKind): IterRow[] {
  const text = readFileSync(path, 'utf8');
  const parsed = parse<Record<string, string>>(text.trim(), { header: true });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: CSV parse error: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of REQUIRED_COLUMNS[kind]) {
    if (!fields.includes(col)) {
      throw new Error(`${path}: missing required column "${col}"`);
    }
  }
  const rows: IterRow[] = parsed.data.map((raw) => ({
    mode: raw['mode'] ?? '',
    r: toNumber(raw['r']) ?? NaN,
    k: toNumber(raw['k']) ?? NaN,
    lambda: toNumber(raw['lambda']) ?? NaN,
    seed: toNumber(raw['seed']),
    iter: toNumber(raw['iter']),
    h1_error: toNumber(raw['h1_error']),
    rel_error: toNumber(raw['rel_error']),
    rho: toNumber(raw['rho']),
    converged: raw['converged'] ?? '',
    wall_ms: toNumber(raw['wall_ms']) ?? 0,
  }));
  if (rows.length === 0) {
    throw new Error(`${path}: CSV contains no data rows`);
  }
  return rows;
}

/** Per-iteration error rows, grouped by seed, sorted by iteration. */
export function decaySeries(rows: IterRow[]): Map<number, IterRow[]> {
  const bySeed = new Map<number, IterRow[]>();
  for (const row of rows) {
    if (row.iter === null || row.rel_error === null || row.seed === null) {
      continue;
    }
    const series = bySeed.get(row.seed) ?? [];
    series.push(row);
    bySeed.set(row.seed, series);
  }
  for (const series of bySeed.values()) {
    series.sort((a, b) => (a.iter ?? 0) - (b.iter ?? 0));
  }
  if (bySeed.size === 0) {
    throw new Error('no per-iteration rows (iter + rel_error) in CSV');
  }
  return bySeed;
}

/** Summary rows carrying a per-seed contraction estimate. */
export function perSeedSummaries(rows: IterRow[]): IterRow[] {
  const out = rows.filter((row) => row.rho !== null && row.seed !== null);
  if (out.length === 0) {
    throw new Error('no per-seed summary rows (rho) in CSV');
  }
  return out;
}

/** Aggregate (seed-mean) rows; falls back to computing means per group. */
export function aggregateSummaries(
  rows: IterRow[],
  key: (row: IterRow) => number,
): Array<{ x: number; rho: number }> {
  const aggregates = rows.filter((row) => row.rho !== null && row.seed === null);
  if (aggregates.length > 0) {
    return aggregates
      .map((row) => ({ x: key(row), rho: row.rho as number }))
      .sort((a, b) => a.x - b.x);
  }
  const groups = new Map<number, number[]>();
  for (const row of perSeedSummaries(rows)) {
    const x = key(row);
    const list = groups.get(x) ?? [];
    list.push(row.rho as number);
    groups.set(x, list);
  }
  return [...groups.entries()]
    .map(([x, rhos]) => ({ x, rho: rhos.reduce((s, v) => s + v, 0) / rhos.length }))
    .sort((a, b) => a.x - b.x);
}
