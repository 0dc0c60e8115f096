import { mkdtempSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { describe, expect, it } from 'vitest';
import {
  aggregateSummaries,
  decaySeries,
  perSeedSummaries,
  readIterCsv,
} from '../src/csv';

const FIXTURES = join(__dirname, 'fixtures');

function tempCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), 'figures-'));
  const path = join(dir, 'data.csv');
  writeFileSync(path, content);
  return path;
}

describe('readIterCsv', () => {
  it('parses the run fixture', () => {
    const rows = readIterCsv(join(FIXTURES, 'run.csv'), 'decay');
    expect(rows.length).toBeGreaterThan(2);
    expect(rows[0].mode).toBe('run');
    expect(rows[0].rel_error).toBe(1.0);
  });

  it('treats empty fields as null', () => {
    const rows = readIterCsv(join(FIXTURES, 'run.csv'), 'decay');
    const summary = rows[rows.length - 1];
    expect(summary.iter).toBeNull();
    expect(summary.rho).not.toBeNull();
  });

  it('rejects a missing required column', () => {
    const path = tempCsv('mode,r,k\nrun,8,1\n');
    expect(() => readIterCsv(path, 'decay')).toThrow(/missing required column/);
  });

  it('rejects an empty CSV', () => {
    const path = tempCsv(
      'mode,r,k,lambda,seed,iter,h1_error,rel_error,rho,converged,wall_ms\n',
    );
    expect(() => readIterCsv(path, 'decay')).toThrow(/no data rows/);
  });
});

describe('decaySeries', () => {
  it('groups per-iteration rows by seed in iteration order', () => {
    const rows = readIterCsv(join(FIXTURES, 'run.csv'), 'decay');
    const bySeed = decaySeries(rows);
    expect(bySeed.size).toBe(1);
    const series = bySeed.get(0)!;
    const iters = series.map((row) => row.iter);
    expect(iters).toEqual([...iters].sort((a, b) => (a ?? 0) - (b ?? 0)));
  });

  it('throws when only summary rows exist', () => {
    const rows = readIterCsv(join(FIXTURES, 'histogram.csv'), 'decay');
    expect(() => decaySeries(rows)).toThrow(/no per-iteration rows/);
  });
});

describe('summaries', () => {
  it('collects per-seed rho rows', () => {
    const rows = readIterCsv(join(FIXTURES, 'histogram.csv'), 'histogram');
    const seeds = perSeedSummaries(rows);
    expect(seeds.length).toBe(6);
    for (const row of seeds) {
      expect(row.rho).toBeLessThan(0);
    }
  });

  it('uses aggregate rows when present', () => {
    const rows = readIterCsv(join(FIXTURES, 'sweep_r.csv'), 'rho-vs-r');
    const means = aggregateSummaries(rows, (row) => row.r);
    expect(means.map((m) => m.x)).toEqual([8, 12, 16]);
  });

  it('computes group means when no aggregate rows exist', () => {
    const rows = readIterCsv(join(FIXTURES, 'sweep_r.csv'), 'rho-vs-r')
      .filter((row) => row.seed !== null);
    const means = aggregateSummaries(rows, (row) => row.r);
    expect(means.length).toBe(3);
    const r8 = rows.filter((row) => row.r === 8 && row.rho !== null);
    const expected = r8.reduce((s, row) => s + (row.rho as number), 0) / r8.length;
    expect(means[0].rho).toBeCloseTo(expected, 12);
  });
});
