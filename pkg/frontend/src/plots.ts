import {
  aggregateSummaries,
  decaySeries,
  IterRow,
  perSeedSummaries,
} from './csv';
import {
  formatTick,
  makeScale,
  Scale,
  ScaleKind,
  Scene,
  Shape,
} from './scene';

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 30, bottom: 55 };

const SERIES_COLORS = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
  '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf',
];

interface Frame {
  x: Scale;
  y: Scale;
  shapes: Shape[];
}

function frame(
  xKind: ScaleKind,
  xLo: number,
  xHi: number,
  yKind: ScaleKind,
  yLo: number,
  yHi: number,
  xLabel: string,
  yLabel: string,
  title: string,
): Frame {
  const x = makeScale(xKind, xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
  const y = makeScale(yKind, yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);
  const shapes: Shape[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  shapes.push({ type: 'polyline', points: [[x0, y0], [x1, y0]], color: '#000', width: 1 });
  shapes.push({ type: 'polyline', points: [[x0, y0], [x0, y1]], color: '#000', width: 1 });
  for (const tick of x.ticks) {
    const px = x.toPixel(tick);
    shapes.push({ type: 'polyline', points: [[px, y0], [px, y0 + 5]], color: '#000', width: 1 });
    shapes.push({
      type: 'text', x: px, y: y0 + 20, text: formatTick(tick),
      size: 12, anchor: 'middle',
    });
  }
  for (const tick of y.ticks) {
    const py = y.toPixel(tick);
    shapes.push({ type: 'polyline', points: [[x0 - 5, py], [x0, py]], color: '#000', width: 1 });
    shapes.push({
      type: 'text', x: x0 - 8, y: py + 4, text: formatTick(tick),
      size: 12, anchor: 'end',
    });
  }
  shapes.push({
    type: 'text', x: (x0 + x1) / 2, y: HEIGHT - 12, text: xLabel,
    size: 14, anchor: 'middle',
  });
  shapes.push({
    type: 'text', x: 16, y: (y0 + y1) / 2, text: yLabel,
    size: 14, anchor: 'middle', rotate: -90,
  });
  shapes.push({
    type: 'text', x: (x0 + x1) / 2, y: 18, text: title,
    size: 15, anchor: 'middle',
  });
  return { x, y, shapes };
}

function extent(values: number[]): [number, number] {
  if (values.length === 0) {
    throw new Error('no finite values to plot');
  }
  return [Math.min(...values), Math.max(...values)];
}

/** Per-iteration relative error, one log-y polyline per seed. */
export function decayPlot(rows: IterRow[]): Scene {
  const bySeed = decaySeries(rows);
  const rels: number[] = [];
  const iters: number[] = [];
  for (const series of bySeed.values()) {
    for (const row of series) {
      if ((row.rel_error as number) > 0) {
        rels.push(row.rel_error as number);
        iters.push(row.iter as number);
      }
    }
  }
  const [iLo, iHi] = extent(iters);
  const [rLo, rHi] = extent(rels);
  const f = frame(
    'linear', iLo, iHi, 'log', rLo, rHi,
    'iteration', 'relative H1 error', 'error decay',
  );
  let idx = 0;
  for (const [, series] of [...bySeed.entries()].sort((a, b) => a[0] - b[0])) {
    const points: Array<[number, number]> = series
      .filter((row) => (row.rel_error as number) > 0)
      .map((row) => [
        f.x.toPixel(row.iter as number),
        f.y.toPixel(row.rel_error as number),
      ]);
    f.shapes.push({
      type: 'polyline', points, color: SERIES_COLORS[idx % SERIES_COLORS.length],
      width: 1.5, cssClass: 'series',
    });
    for (const [px, py] of points) {
      f.shapes.push({
        type: 'circle', cx: px, cy: py, radius: 2.5,
        color: SERIES_COLORS[idx % SERIES_COLORS.length],
      });
    }
    idx += 1;
  }
  return { width: WIDTH, height: HEIGHT, shapes: f.shapes };
}

/** Histogram of per-seed contraction factors exp(rho). */
export function histogramPlot(rows: IterRow[]): Scene {
  const factors = perSeedSummaries(rows).map((row) => Math.exp(row.rho as number));
  const [lo, hi] = extent(factors);
  const nBins = Math.max(5, Math.min(15, Math.ceil(Math.sqrt(factors.length) * 2)));
  const span = hi > lo ? hi - lo : Math.max(hi * 0.1, 1e-6);
  const binLo = hi > lo ? lo : lo - span / 2;
  const width = span / nBins;
  const counts = new Array(nBins).fill(0);
  for (const v of factors) {
    const bin = Math.min(nBins - 1, Math.floor((v - binLo) / width));
    counts[bin] += 1;
  }
  const f = frame(
    'linear', binLo, binLo + nBins * width,
    'linear', 0, Math.max(...counts),
    'contraction factor exp(rho)', 'count', 'contraction factor histogram',
  );
  for (let b = 0; b < nBins; b++) {
    if (counts[b] === 0) {
      continue;
    }
    const px0 = f.x.toPixel(binLo + b * width);
    const px1 = f.x.toPixel(binLo + (b + 1) * width);
    const py = f.y.toPixel(counts[b]);
    const base = f.y.toPixel(0);
    f.shapes.push({
      type: 'rect', x: px0 + 1, y: py,
      width: Math.max(px1 - px0 - 2, 1), height: base - py,
      color: '#1f77b4',
    });
  }
  return { width: WIDTH, height: HEIGHT, shapes: f.shapes };
}

/** Seed-mean contraction factor against the domain size r. */
export function rhoVsRPlot(rows: IterRow[]): Scene {
  const seeds = perSeedSummaries(rows);
  const lambdas = [...new Set(seeds.map((row) => row.lambda))].sort((a, b) => a - b);
  const xs = seeds.map((row) => row.r);
  const ys = seeds.map((row) => Math.exp(row.rho as number));
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);
  const f = frame(
    'linear', xLo, xHi, 'linear', Math.min(yLo, 0), yHi * 1.05,
    'domain size r', 'contraction factor exp(rho)', 'contraction factor vs r',
  );
  lambdas.forEach((lam, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    for (const row of seeds.filter((s) => s.lambda === lam)) {
      f.shapes.push({
        type: 'circle', cx: f.x.toPixel(row.r),
        cy: f.y.toPixel(Math.exp(row.rho as number)), radius: 2.5, color,
      });
    }
    const means = aggregateSummaries(
      rows.filter((row) => row.lambda === lam),
      (row) => row.r,
    );
    f.shapes.push({
      type: 'polyline',
      points: means.map((m) => [f.x.toPixel(m.x), f.y.toPixel(Math.exp(m.rho))]),
      color, width: 2, cssClass: 'mean-line',
    });
    f.shapes.push({
      type: 'text', x: WIDTH - MARGIN.right - 6,
      y: MARGIN.top + 16 * (idx + 1),
      text: `lambda=${lam}`, size: 12, anchor: 'end',
    });
  });
  return { width: WIDTH, height: HEIGHT, shapes: f.shapes };
}

/** Least-squares intercept of a fixed slope-1/2 line in log-log space. */
export function guideLineIntercept(
  points: Array<{ lambda: number; factor: number }>,
): number {
  const residuals = points.map(
    (p) => Math.log10(p.factor) - 0.5 * Math.log10(p.lambda),
  );
  return residuals.reduce((s, v) => s + v, 0) / residuals.length;
}

/** Seed-mean contraction factor against lambda, log-log, with the
 *  slope-1/2 guide line predicted by the theory. */
export function rhoVsLambdaPlot(rows: IterRow[]): Scene {
  const seeds = perSeedSummaries(rows);
  const means = aggregateSummaries(rows, (row) => row.lambda);
  const xs = seeds.map((row) => row.lambda);
  const ys = seeds.map((row) => Math.exp(row.rho as number));
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);
  const f = frame(
    'log', xLo, xHi, 'log', yLo, yHi,
    'lambda', 'contraction factor exp(rho)', 'contraction factor vs lambda',
  );
  for (const row of seeds) {
    f.shapes.push({
      type: 'circle', cx: f.x.toPixel(row.lambda),
      cy: f.y.toPixel(Math.exp(row.rho as number)), radius: 2.5,
      color: '#1f77b4',
    });
  }
  f.shapes.push({
    type: 'polyline',
    points: means.map((m) => [f.x.toPixel(m.x), f.y.toPixel(Math.exp(m.rho))]),
    color: '#d62728', width: 2, cssClass: 'mean-line',
  });
  const intercept = guideLineIntercept(
    means.map((m) => ({ lambda: m.x, factor: Math.exp(m.rho) })),
  );
  const guideY = (lam: number) => Math.pow(10, intercept + 0.5 * Math.log10(lam));
  f.shapes.push({
    type: 'polyline',
    points: [
      [f.x.toPixel(xLo), f.y.toPixel(guideY(xLo))],
      [f.x.toPixel(xHi), f.y.toPixel(guideY(xHi))],
    ],
    color: '#555', width: 1.5, dashed: true, cssClass: 'guide-line',
  });
  f.shapes.push({
    type: 'text', x: WIDTH - MARGIN.right - 6, y: MARGIN.top + 16,
    text: 'slope 1/2 guide', size: 12, anchor: 'end',
  });
  return { width: WIDTH, height: HEIGHT, shapes: f.shapes };
}
