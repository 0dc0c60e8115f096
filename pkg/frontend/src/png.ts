/** Minimal PNG writer: RGB raster, deflate via node's zlib.
 *
 * Keeps the figure tool free of native canvas dependencies.  Text
 * shapes are skipped in raster output (the SVG backend carries the
 * labels); all plot geometry is drawn.
 */

import { deflateSync } from 'zlib';
import { Scene, Shape } from './scene';

type Rgb = [number, number, number];

function parseColor(color: string): Rgb {
  const named: Record<string, Rgb> = { white: [255, 255, 255], black: [0, 0, 0] };
  if (color in named) {
    return named[color];
  }
  let hex = color.replace('#', '');
  if (hex.length === 3) {
    hex = hex.split('').map((c) => c + c).join('');
  }
  const value = parseInt(hex, 16);
  return [(value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff];
}

class Raster {
  readonly data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, [r, g, b]: Rgb): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) {
      return;
    }
    const at = (yi * this.width + xi) * 3;
    this.data[at] = r;
    this.data[at + 1] = g;
    this.data[at + 2] = b;
  }

  disc(cx: number, cy: number, radius: number, color: Rgb): void {
    const r2 = radius * radius;
    for (let dy = -radius; dy <= radius; dy++) {
      for (let dx = -radius; dx <= radius; dx++) {
        if (dx * dx + dy * dy <= r2) {
          this.set(cx + dx, cy + dy, color);
        }
      }
    }
  }

  line(
    x0: number, y0: number, x1: number, y1: number,
    color: Rgb, width: number, dashed: boolean,
  ): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1) * 2;
    const half = Math.max(Math.floor(width / 2), 0);
    for (let s = 0; s <= steps; s++) {
      if (dashed && Math.floor(s / 12) % 2 === 1) {
        continue;
      }
      const x = x0 + ((x1 - x0) * s) / steps;
      const y = y0 + ((y1 - y0) * s) / steps;
      for (let dy = -half; dy <= half; dy++) {
        for (let dx = -half; dx <= half; dx++) {
          this.set(x + dx, y + dy, color);
        }
      }
    }
  }

  fillRect(x: number, y: number, w: number, h: number, color: Rgb): void {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
        this.set(xx, yy, color);
      }
    }
  }
}

function drawShape(raster: Raster, shape: Shape): void {
  switch (shape.type) {
    case 'polyline': {
      const color = parseColor(shape.color);
      for (let i = 1; i < shape.points.length; i++) {
        const [x0, y0] = shape.points[i - 1];
        const [x1, y1] = shape.points[i];
        raster.line(x0, y0, x1, y1, color, shape.width, Boolean(shape.dashed));
      }
      break;
    }
    case 'circle':
      raster.disc(shape.cx, shape.cy, Math.round(shape.radius),
                  parseColor(shape.color));
      break;
    case 'rect':
      raster.fillRect(shape.x, shape.y, shape.width, shape.height,
                      parseColor(shape.color));
      break;
    case 'text':
      break; // labels only exist in the SVG backend
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let crc = 0xffffffff;
  for (const byte of buf) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, 'ascii');
  const body = Buffer.concat([Buffer.from(type, 'ascii'), Buffer.from(payload)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload), tail]);
}

export function renderPng(scene: Scene): Buffer {
  const raster = new Raster(scene.width, scene.height);
  for (const shape of scene.shapes) {
    drawShape(raster, shape);
  }

  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(scene.width, 0);
  ihdr.writeUInt32BE(scene.height, 4);
  ihdr[8] = 8;  // bit depth
  ihdr[9] = 2;  // color type: truecolor RGB
  // compression, filter, interlace all 0

  const stride = scene.width * 3;
  const filtered = Buffer.alloc((stride + 1) * scene.height);
  for (let y = 0; y < scene.height; y++) {
    filtered[y * (stride + 1)] = 0; // filter type none
    filtered.set(
      raster.data.subarray(y * stride, (y + 1) * stride),
      y * (stride + 1) + 1,
    );
  }

  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk('IHDR', ihdr),
    chunk('IDAT', deflateSync(filtered, { level: 9 })),
    chunk('IEND', new Uint8Array(0)),
  ]);
}
