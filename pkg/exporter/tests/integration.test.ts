/**
 * Contract test against the consuming CLI: a 10-image folder exports to
 * EMB1 files with (N=10, n=2048) and (N=10, n=3072) that `sidmetrics info`
 * reads without error, and repeated runs produce identical bytes.
 */

import { spawnSync } from 'node:child_process'
import { mkdtempSync, readFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'

import { describe, expect, it } from 'vitest'

import { runExport } from '../src/export.js'
import { writeSolidFolder } from './helpers.js'

const quiet = () => {}

function sidmetricsAvailable(): boolean {
  return spawnSync('sidmetrics', ['--version'], { encoding: 'utf-8' }).status === 0
}

describe.skipIf(!sidmetricsAvailable())('primary CLI contract', () => {
  it('exports a 10-image folder that `sidmetrics info` accepts', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'exporter-contract-'))
    const imgDir = join(dir, 'imgs')
    writeSolidFolder(imgDir, 10)

    const cases: Array<{ out: string; dim: number; options: object }> = [
      {
        out: join(dir, 'features.emb'),
        dim: 2048,
        options: { mode: 'inception', backbone: 'projection' },
      },
      { out: join(dir, 'pixels.emb'), dim: 3072, options: { mode: 'pixels' } },
    ]
    for (const { out, dim, options } of cases) {
      const first = await runExport({
        sourceDir: imgDir,
        outputPath: out,
        log: quiet,
        ...(options as { mode: 'inception' | 'pixels' }),
      })
      expect(first.image_count).toBe(10)
      expect(first.dim).toBe(dim)

      const info = spawnSync('sidmetrics', ['info', out], { encoding: 'utf-8' })
      expect(info.status, info.stderr).toBe(0)
      expect(info.stdout).toContain('count:     10')
      expect(info.stdout).toContain(`dim:       ${dim}`)

      const bytes = readFileSync(out)
      await runExport({
        sourceDir: imgDir,
        outputPath: out,
        log: quiet,
        ...(options as { mode: 'inception' | 'pixels' }),
      })
      expect(readFileSync(out).equals(bytes)).toBe(true)
    }
  }, 120_000)

  it('gray export feeds the sharpness command', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'exporter-sharp-'))
    const imgDir = join(dir, 'imgs')
    writeSolidFolder(imgDir, 3)
    const out = join(dir, 'gray.emb')
    await runExport({ sourceDir: imgDir, mode: 'gray', outputPath: out, log: quiet })
    const result = spawnSync('sidmetrics', ['sharpness', out], { encoding: 'utf-8' })
    expect(result.status, result.stderr).toBe(0)
    // solid images have an exactly flat edge map
    expect(result.stdout).toContain('sharpness: 0.0')
  }, 60_000)
})
