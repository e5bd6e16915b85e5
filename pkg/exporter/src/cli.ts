#!/usr/bin/env node
/** Command-line entry: `cloud-export export --mode ... --in DIR --out FILE.emb`. */

import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'

import { runExport, type ExportMode } from './export.js'

function parseShape(text: string): { height: number; width: number } {
  const match = /^(\d+)x(\d+)$/.exec(text)
  if (!match) throw new Error(`--size must look like 32x32, got ${text}`)
  return { height: Number(match[1]), width: Number(match[2]) }
}

await yargs(hideBin(process.argv))
  .command(
    'export',
    'convert an image folder into an EMB1 embedding cloud',
    (cmd) =>
      cmd
        .option('mode', {
          choices: ['inception', 'pixels', 'gray'] as const,
          demandOption: true,
          describe: 'inception features (2048-d), raw pixels (3072-d) or grayscale matrices',
        })
        .option('in', {
          type: 'string',
          demandOption: true,
          describe: 'image folder (png/jpeg/ppm/pgm)',
        })
        .option('out', { type: 'string', demandOption: true, describe: 'EMB1 output path' })
        .option('label', { type: 'string', describe: 'cloud label (default: folder name)' })
        .option('backbone', {
          choices: ['inception', 'projection'] as const,
          default: 'inception' as const,
          describe:
            'inception mode only: real local weights, or the deterministic seeded projection',
        })
        .option('model-dir', {
          type: 'string',
          describe: 'inception mode: directory holding a tfjs graph model (model.json + shards)',
        })
        .option('batch-size', { type: 'number', default: 16 })
        .option('size', {
          type: 'string',
          default: '32x32',
          describe: 'gray mode matrix shape HxW',
        }),
    async (argv) => {
      try {
        const manifest = await runExport({
          sourceDir: argv.in,
          mode: argv.mode as ExportMode,
          outputPath: argv.out,
          label: argv.label,
          backbone: argv.backbone,
          modelDir: argv.modelDir,
          batchSize: argv.batchSize,
          graySize: parseShape(argv.size),
        })
        console.log(
          `wrote ${manifest.output_path}: N=${manifest.image_count}, n=${manifest.dim}, ` +
            `label=${manifest.label}` +
            (manifest.skipped.length ? `, skipped ${manifest.skipped.length}` : ''),
        )
      } catch (err) {
        console.error(`error: ${(err as Error).message}`)
        process.exit(2)
      }
    },
  )
  .demandCommand(1)
  .strict()
  .fail((message, error) => {
    console.error(`error: ${message ?? (error as Error).message}`)
    process.exit(2)
  })
  .parseAsync()
