import { Scene, Shape } from './scene';

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;');
}

function fmt(value: number): string {
  return Number(value.toFixed(2)).toString();
}

function shapeToSvg(shape: Shape): string {
  switch (shape.type) {
    case 'polyline': {
      const points = shape.points
        .map(([x, y]) => `${fmt(x)},${fmt(y)}`)
        .join(' ');
      const dash = shape.dashed ? ' stroke-dasharray="6,4"' : '';
      const cls = shape.cssClass ? ` class="${shape.cssClass}"` : '';
      return `<polyline${cls} points="${points}" fill="none" ` +
        `stroke="${shape.color}" stroke-width="${shape.width}"${dash}/>`;
    }
    case 'circle':
      return `<circle cx="${fmt(shape.cx)}" cy="${fmt(shape.cy)}" ` +
        `r="${shape.radius}" fill="${shape.color}"/>`;
    case 'rect':
      return `<rect x="${fmt(shape.x)}" y="${fmt(shape.y)}" ` +
        `width="${fmt(shape.width)}" height="${fmt(shape.height)}" ` +
        `fill="${shape.color}"/>`;
    case 'text': {
      const rotate = shape.rotate
        ? ` transform="rotate(${shape.rotate} ${fmt(shape.x)} ${fmt(shape.y)})"`
        : '';
      return `<text x="${fmt(shape.x)}" y="${fmt(shape.y)}" ` +
        `font-family="sans-serif" font-size="${shape.size}" ` +
        `text-anchor="${shape.anchor}"${rotate}>${esc(shape.text)}</text>`;
    }
  }
}

export function renderSvg(scene: Scene): string {
  const body = scene.shapes.map(shapeToSvg).join('\n  ');
  return `<svg xmlns="http://www.w3.org/2000/svg" ` +
    `width="${scene.width}" height="${scene.height}" ` +
    `viewBox="0 0 ${scene.width} ${scene.height}">\n  ` +
    `<rect x="0" y="0" width="${scene.width}" height="${scene.height}" ` +
    `fill="white"/>\n  ${body}\n</svg>\n`;
}
