import { describe, expect, it } from 'vitest';
import { formatTick, linearTicks, logTicks, makeScale } from '../src/scene';

describe('makeScale', () => {
  it('maps linear endpoints to the pixel range', () => {
    const scale = makeScale('linear', 0, 10, 50, 250);
    expect(scale.toPixel(0)).toBe(50);
    expect(scale.toPixel(10)).toBe(250);
    expect(scale.toPixel(5)).toBe(150);
  });

  it('maps log decades evenly', () => {
    const scale = makeScale('log', 1e-4, 1, 0, 400);
    expect(scale.toPixel(1e-4)).toBeCloseTo(0, 9);
    expect(scale.toPixel(1e-2)).toBeCloseTo(200, 9);
    expect(scale.toPixel(1)).toBeCloseTo(400, 9);
  });

  it('supports inverted pixel ranges (screen y axis)', () => {
    const scale = makeScale('linear', 0, 1, 300, 100);
    expect(scale.toPixel(0)).toBe(300);
    expect(scale.toPixel(1)).toBe(100);
  });

  it('pads a degenerate data range', () => {
    const scale = makeScale('linear', 3, 3, 0, 100);
    expect(scale.toPixel(3)).toBeGreaterThan(0);
    expect(scale.toPixel(3)).toBeLessThan(100);
  });

  it('rejects nonpositive log bounds', () => {
    expect(() => makeScale('log', 0, 1, 0, 100)).toThrow(/positive/);
  });
});

describe('ticks', () => {
  it('linear ticks cover the range at a round step', () => {
    const ticks = linearTicks(0, 10);
    expect(ticks[0]).toBe(0);
    expect(ticks[ticks.length - 1]).toBe(10);
    expect(ticks.length).toBeGreaterThanOrEqual(3);
    expect(ticks.length).toBeLessThanOrEqual(7);
  });

  it('log ticks are powers of ten inside the range', () => {
    expect(logTicks(1e-9, 1)).toEqual(
      [1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1],
    );
  });

  it('narrow log ranges fall back to mantissa ticks', () => {
    const ticks = logTicks(0.1, 0.5);
    expect(ticks.length).toBeGreaterThanOrEqual(2);
  });
});

describe('formatTick', () => {
  it('prints small values in scientific notation', () => {
    expect(formatTick(1e-6)).toBe('1e-6');
  });

  it('prints ordinary values plainly', () => {
    expect(formatTick(0.25)).toBe('0.25');
    expect(formatTick(100)).toBe('100');
  });
});
