/** Backend-neutral description of a finished plot.
 *
 * Plot builders emit scenes in pixel coordinates; the SVG and PNG
 * writers only translate shapes, so both outputs show the same
 * geometry.
 */

export interface Polyline {
  type: 'polyline';
  points: Array<[number, number]>;
  color: string;
  width: number;
  dashed?: boolean;
  cssClass?: string;
}

export interface Circle {
  type: 'circle';
  cx: number;
  cy: number;
  radius: number;
  color: string;
}

export interface Rect {
  type: 'rect';
  x: number;
  y: number;
  width: number;
  height: number;
  color: string;
}

export interface Text {
  type: 'text';
  x: number;
  y: number;
  text: string;
  size: number;
  anchor: 'start' | 'middle' | 'end';
  rotate?: number;
}

export type Shape = Polyline | Circle | Rect | Text;

export interface Scene {
  width: number;
  height: number;
  shapes: Shape[];
}

export type ScaleKind = 'linear' | 'log';

export interface Scale {
  toPixel(value: number): number;
  ticks: number[];
}

/** Map [lo, hi] (or its log) onto the pixel range [p0, p1]. */
export function makeScale(
  kind: ScaleKind,
  lo: number,
  hi: number,
  p0: number,
  p1: number,
): Scale {
  if (kind === 'log' && (lo <= 0 || hi <= 0)) {
    throw new Error(`log scale needs positive bounds, got [${lo}, ${hi}]`);
  }
  if (!(lo < hi)) {
    // Degenerate data range: pad so a flat series still renders.
    const pad = kind === 'log' ? 2 : Math.abs(lo) * 0.1 + 1;
    hi = kind === 'log' ? lo * pad : lo + pad;
    lo = kind === 'log' ? lo / pad : lo - pad;
  }
  const t = (v: number) => (kind === 'log' ? Math.log10(v) : v);
  const a = t(lo);
  const b = t(hi);
  return {
    toPixel: (v: number) => p0 + ((t(v) - a) / (b - a)) * (p1 - p0),
    ticks: kind === 'log' ? logTicks(lo, hi) : linearTicks(lo, hi),
  };
}

export function linearTicks(lo: number, hi: number): number[] {
  const span = hi - lo;
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 6)!;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const eLo = Math.floor(Math.log10(lo));
  const eHi = Math.ceil(Math.log10(hi));
  // Number('1e-5') avoids the rounding error of Math.pow(10, -5).
  for (let e = eLo; e <= eHi; e++) {
    const v = Number(`1e${e}`);
    if (v >= lo * 0.999 && v <= hi * 1.001) {
      ticks.push(v);
    }
  }
  if (ticks.length < 2) {
    // Narrow range: fall back to 1-2-5 mantissa ticks.
    for (let e = eLo; e <= eHi; e++) {
      for (const m of [1, 2, 5]) {
        const v = m * Number(`1e${e}`);
        if (v >= lo * 0.999 && v <= hi * 1.001) {
          ticks.push(v);
        }
      }
    }
    ticks.sort((a, b) => a - b);
  }
  return ticks;
}

export function formatTick(value: number): string {
  if (value !== 0 && (Math.abs(value) < 1e-3 || Math.abs(value) >= 1e4)) {
    return value.toExponential(0).replace('e-', 'e-').replace('e+', 'e');
  }
  return Number(value.toPrecision(6)).toString();
}
