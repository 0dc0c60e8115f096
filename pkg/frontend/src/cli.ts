#!/usr/bin/env node
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { FigureKind } from './csv';
import { renderFigure } from './render';

const KINDS: FigureKind[] = ['decay', 'histogram', 'rho-vs-r', 'rho-vs-lambda'];

const argv = yargs(hideBin(process.argv))
  .command('$0 <kind>', 'render a figure from an experiments CSV', (cmd) =>
    cmd.positional('kind', {
      describe: 'figure kind',
      choices: KINDS,
      demandOption: true,
    }),
  )
  .option('in', {
    type: 'string',
    describe: 'input CSV file',
    demandOption: true,
  })
  .option('out', {
    type: 'string',
    describe: 'output image file (.png or .svg)',
    demandOption: true,
  })
  .strict()
  .parseSync();

try {
  renderFigure(argv.kind as FigureKind, argv.in, argv.out);
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`);
  process.exit(1);
}
