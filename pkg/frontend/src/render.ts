import { writeFileSync } from 'fs';
import { extname } from 'path';
import { FigureKind, readIterCsv } from './csv';
import {
  decayPlot,
  histogramPlot,
  rhoVsLambdaPlot,
  rhoVsRPlot,
} from './plots';
import { renderPng } from './png';
import { Scene } from './scene';
import { renderSvg } from './svg';

const BUILDERS: Record<FigureKind, (rows: ReturnType<typeof readIterCsv>) => Scene> = {
  decay: decayPlot,
  histogram: histogramPlot,
  'rho-vs-r': rhoVsRPlot,
  'rho-vs-lambda': rhoVsLambdaPlot,
};

export function buildScene(kind: FigureKind, inPath: string): Scene {
  const rows = readIterCsv(inPath, kind);
  return BUILDERS[kind](rows);
}

/** Render one figure; the output format follows the file extension. */
export function renderFigure(kind: FigureKind, inPath: string, outPath: string): void {
  const scene = buildScene(kind, inPath);
  const ext = extname(outPath).toLowerCase();
  if (ext === '.svg') {
    writeFileSync(outPath, renderSvg(scene));
  } else if (ext === '.png') {
    writeFileSync(outPath, renderPng(scene));
  } else {
    throw new Error(`unsupported output format "${ext}" (use .png or .svg)`);
  }
}
