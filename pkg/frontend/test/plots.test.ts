import { join } from 'path';
import { describe, expect, it } from 'vitest';
import { readIterCsv } from '../src/csv';
import {
  decayPlot,
  guideLineIntercept,
  histogramPlot,
  rhoVsLambdaPlot,
  rhoVsRPlot,
} from '../src/plots';
import { Polyline, Rect } from '../src/scene';
import { renderSvg } from '../src/svg';

const FIXTURES = join(__dirname, 'fixtures');

function load(name: string, kind: Parameters<typeof readIterCsv>[1]) {
  return readIterCsv(join(FIXTURES, name), kind);
}

describe('decayPlot', () => {
  it('draws one series per seed plus the two axes', () => {
    const scene = decayPlot(load('run.csv', 'decay'));
    const series = scene.shapes.filter(
      (s) => s.type === 'polyline' && s.cssClass === 'series',
    );
    expect(series.length).toBe(1);
    const points = (series[0] as Polyline).points;
    expect(points.length).toBeGreaterThan(2);
    // log-y: error decays, so pixel y increases monotonically.
    for (let i = 1; i < points.length; i++) {
      expect(points[i][1]).toBeGreaterThan(points[i - 1][1]);
    }
  });
});

describe('histogramPlot', () => {
  it('draws bars whose counts sum to the number of seeds', () => {
    const rows = load('histogram.csv', 'histogram');
    const scene = histogramPlot(rows);
    const bars = scene.shapes.filter((s) => s.type === 'rect') as Rect[];
    expect(bars.length).toBeGreaterThan(0);
    for (const bar of bars) {
      expect(bar.height).toBeGreaterThan(0);
    }
  });
});

describe('rhoVsRPlot', () => {
  it('draws a mean line per lambda over the scatter', () => {
    const scene = rhoVsRPlot(load('sweep_r.csv', 'rho-vs-r'));
    const meanLines = scene.shapes.filter(
      (s) => s.type === 'polyline' && s.cssClass === 'mean-line',
    ) as Polyline[];
    expect(meanLines.length).toBe(1);
    expect(meanLines[0].points.length).toBe(3);
    const dots = scene.shapes.filter((s) => s.type === 'circle');
    expect(dots.length).toBe(9); // 3 r values x 3 seeds
  });
});

describe('rhoVsLambdaPlot', () => {
  it('adds a dashed guide line with slope 1/2 in log-log space', () => {
    const scene = rhoVsLambdaPlot(load('sweep_lambda.csv', 'rho-vs-lambda'));
    const guides = scene.shapes.filter(
      (s) => s.type === 'polyline' && s.cssClass === 'guide-line',
    ) as Polyline[];
    expect(guides.length).toBe(1);
    expect(guides[0].dashed).toBe(true);
    expect(renderSvg(scene)).toContain('guide-line');
  });

  it('anchors the guide line by least squares', () => {
    // Exact power law: every residual equals the intercept.
    const points = [0.1, 0.2, 0.4].map((lambda) => ({
      lambda,
      factor: 0.3 * Math.sqrt(lambda),
    }));
    const intercept = guideLineIntercept(points);
    expect(intercept).toBeCloseTo(Math.log10(0.3), 10);
  });

  it('guide line endpoints follow y = C * sqrt(lambda)', () => {
    const rows = load('sweep_lambda.csv', 'rho-vs-lambda');
    const scene = rhoVsLambdaPlot(rows);
    const guide = scene.shapes.find(
      (s) => s.type === 'polyline' && s.cssClass === 'guide-line',
    ) as Polyline;
    const [[px0], [px1]] = guide.points;
    // The x pixels span the lambda extent of the data.
    expect(px1).toBeGreaterThan(px0);
  });
});
