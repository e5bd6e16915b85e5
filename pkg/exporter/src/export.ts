/**
 * Export pipeline: image folder -> EMB1 cloud file plus a JSON manifest.
 *
 * Modes:
 *   inception  2048-d feature rows from the embedding backbone
 *              (299x299x3 bilinear resize, [-1,1] preprocessing);
 *   pixels     3072-d rows: 32x32x3 bilinear resize, [0,1], row-major
 *              (height, width, channel) flattening;
 *   gray       one channel-mean grayscale matrix per image, flattened
 *              row-major, with the shape encoded in the cloud label.
 *
 * Files are processed in sorted name order and undecodable ones are skipped
 * with a warning, so two runs over the same folder produce identical bytes.
 */

import { readdirSync, writeFileSync } from 'node:fs'
import { basename, join } from 'node:path'

import { makeBackbone, preprocess, FEATURE_DIM } from './backbone.js'
import { encodeEmb1, type Cloud } from './emb1.js'
import { decodeImage, resizeBilinear, toGrayscale, type RgbImage } from './image.js'

export type ExportMode = 'inception' | 'pixels' | 'gray'

export interface ExportOptions {
  sourceDir: string
  mode: ExportMode
  outputPath: string
  label?: string
  /** inception-mode backbone: 'inception' (local weights) or 'projection' */
  backbone?: string
  modelDir?: string
  batchSize?: number
  /** gray-mode matrix shape */
  graySize?: { height: number; width: number }
  log?: (message: string) => void
}

export interface ExportManifest {
  source_dir: string
  mode: ExportMode
  image_count: number
  skipped: string[]
  resize_policy: string
  output_path: string
  model_fingerprint: string
  label: string
  dim: number
}

const PIXEL_SIZE = 32

export function listImages(dir: string): string[] {
  return readdirSync(dir)
    .filter((name) => /\.(png|jpe?g|ppm|pgm)$/i.test(name))
    .sort()
}

function decodeAll(
  dir: string,
  log: (message: string) => void,
): { images: { name: string; image: RgbImage }[]; skipped: string[] } {
  const images: { name: string; image: RgbImage }[] = []
  const skipped: string[] = []
  for (const name of listImages(dir)) {
    try {
      images.push({ name, image: decodeImage(join(dir, name)) })
    } catch (err) {
      skipped.push(name)
      log(`warning: skipping ${name}: ${(err as Error).message}`)
    }
  }
  return { images, skipped }
}

export async function runExport(options: ExportOptions): Promise<ExportManifest> {
  const log = options.log ?? ((message) => console.error(message))
  const { images, skipped } = decodeAll(options.sourceDir, log)
  if (images.length === 0) {
    throw new Error(`no decodable images in ${options.sourceDir}`)
  }
  const baseLabel = options.label ?? basename(options.sourceDir)

  let cloud: Cloud
  let resizePolicy: string
  let fingerprint = 'none'

  if (options.mode === 'pixels') {
    resizePolicy = `bilinear ${PIXEL_SIZE}x${PIXEL_SIZE}, half-pixel centers`
    const dim = PIXEL_SIZE * PIXEL_SIZE * 3
    const data = new Float64Array(images.length * dim)
    images.forEach(({ image }, row) => {
      data.set(resizeBilinear(image, PIXEL_SIZE, PIXEL_SIZE).data, row * dim)
    })
    cloud = { label: baseLabel, count: images.length, dim, data }
  } else if (options.mode === 'gray') {
    const height = options.graySize?.height ?? PIXEL_SIZE
    const width = options.graySize?.width ?? PIXEL_SIZE
    resizePolicy = `bilinear ${height}x${width}, half-pixel centers, channel-mean gray`
    const dim = height * width
    const data = new Float64Array(images.length * dim)
    images.forEach(({ image }, row) => {
      data.set(toGrayscale(resizeBilinear(image, width, height)), row * dim)
    })
    cloud = { label: `${baseLabel}:gray:${height}x${width}`, count: images.length, dim, data }
  } else if (options.mode === 'inception') {
    resizePolicy = 'bilinear 299x299, half-pixel centers, scaled to [-1, 1]'
    const backbone = makeBackbone(options.backbone ?? 'inception', options.modelDir)
    fingerprint = await backbone.fingerprint()
    const batchSize = options.batchSize ?? 16
    const data = new Float64Array(images.length * FEATURE_DIM)
    for (let start = 0; start < images.length; start += batchSize) {
      const batch = images.slice(start, start + batchSize).map(({ image }) => preprocess(image))
      const rows = await backbone.embed(batch)
      rows.forEach((row, i) => data.set(row, (start + i) * FEATURE_DIM))
    }
    cloud = { label: baseLabel, count: images.length, dim: FEATURE_DIM, data }
  } else {
    throw new Error(`unknown mode ${options.mode as string}`)
  }

  writeFileSync(options.outputPath, encodeEmb1(cloud))
  const manifest: ExportManifest = {
    source_dir: options.sourceDir,
    mode: options.mode,
    image_count: cloud.count,
    skipped,
    resize_policy: resizePolicy,
    output_path: options.outputPath,
    model_fingerprint: fingerprint,
    label: cloud.label,
    dim: cloud.dim,
  }
  writeFileSync(`${options.outputPath}.manifest.json`, JSON.stringify(manifest, null, 2) + '\n')
  return manifest
}
