/**
 * Embedding backbones producing the 2048-d feature rows.
 *
 * `inception` runs a local tfjs GraphModel (InceptionV3 pool layer exported
 * as a graph model directory); nothing is downloaded. `projection` is a
 * deterministic stand-in with the same input/output contract: the
 * preprocessed 299x299x3 tensor is block-averaged to 32x32x3 and pushed
 * through a fixed seeded random projection with a tanh nonlinearity. It
 * exists so the export pipeline stays testable on machines without weights;
 * its fingerprint makes clear which backbone produced a file.
 */

import { createHash } from 'node:crypto'

import type { RgbImage } from './image.js'
import { resizeBilinear } from './image.js'

export const FEATURE_DIM = 2048
export const INPUT_SIZE = 299

const PROJECTION_SEED = 0x51d5eed
const PROJECTION_POOL = 32

export interface Backbone {
  name: string
  fingerprint(): Promise<string>
  /** batch of preprocessed 299x299x3 tensors (values in [-1, 1]) -> rows of 2048 features */
  embed(batch: Float64Array[]): Promise<Float64Array[]>
}

/** Standard preprocessing: bilinear resize to 299x299, scale [0,1] -> [-1,1]. */
export function preprocess(img: RgbImage): Float64Array {
  const resized = resizeBilinear(img, INPUT_SIZE, INPUT_SIZE)
  const out = new Float64Array(resized.data.length)
  for (let i = 0; i < out.length; i++) out[i] = resized.data[i] * 2 - 1
  return out
}

/** mulberry32: tiny deterministic PRNG, good enough for a fixed projection. */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0
  return () => {
    state = (state + 0x6d2b79f5) >>> 0
    let t = state
    t = Math.imul(t ^ (t >>> 15), t | 1)
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61)
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296
  }
}

export class ProjectionBackbone implements Backbone {
  readonly name = 'projection'
  private weights: Float64Array | null = null
  private readonly inputDim = PROJECTION_POOL * PROJECTION_POOL * 3

  async fingerprint(): Promise<string> {
    return `deterministic-projection-v1(seed=0x${PROJECTION_SEED.toString(16)})`
  }

  private ensureWeights(): Float64Array {
    if (this.weights === null) {
      const rand = mulberry32(PROJECTION_SEED)
      const scale = Math.sqrt(3 / this.inputDim) // entries uniform(-a, a), variance 1/inputDim
      const w = new Float64Array(this.inputDim * FEATURE_DIM)
      for (let i = 0; i < w.length; i++) w[i] = (rand() * 2 - 1) * scale
      this.weights = w
    }
    return this.weights
  }

  private pool(tensor: Float64Array): Float64Array {
    const out = new Float64Array(this.inputDim)
    const counts = new Float64Array(this.inputDim)
    for (let y = 0; y < INPUT_SIZE; y++) {
      const by = Math.min(Math.floor((y * PROJECTION_POOL) / INPUT_SIZE), PROJECTION_POOL - 1)
      for (let x = 0; x < INPUT_SIZE; x++) {
        const bx = Math.min(Math.floor((x * PROJECTION_POOL) / INPUT_SIZE), PROJECTION_POOL - 1)
        for (let c = 0; c < 3; c++) {
          const idx = (by * PROJECTION_POOL + bx) * 3 + c
          out[idx] += tensor[(y * INPUT_SIZE + x) * 3 + c]
          counts[idx] += 1
        }
      }
    }
    for (let i = 0; i < out.length; i++) out[i] /= counts[i]
    return out
  }

  async embed(batch: Float64Array[]): Promise<Float64Array[]> {
    const w = this.ensureWeights()
    return batch.map((tensor) => {
      const pooled = this.pool(tensor)
      const features = new Float64Array(FEATURE_DIM)
      for (let k = 0; k < FEATURE_DIM; k++) {
        let acc = 0
        for (let j = 0; j < pooled.length; j++) acc += pooled[j] * w[j * FEATURE_DIM + k]
        features[k] = Math.tanh(acc)
      }
      return features
    })
  }
}

export class InceptionBackbone implements Backbone {
  readonly name = 'inception'

  constructor(private readonly modelDir: string) {}

  private model: unknown | null = null

  async fingerprint(): Promise<string> {
    const { readFileSync, readdirSync } = await import('node:fs')
    const { join } = await import('node:path')
    const hash = createHash('sha256')
    for (const file of readdirSync(this.modelDir).sort()) {
      hash.update(file)
      hash.update(readFileSync(join(this.modelDir, file)))
    }
    return `tfjs-graph-model:sha256:${hash.digest('hex')}`
  }

  private async load() {
    if (this.model === null) {
      const tf = await import('@tensorflow/tfjs')
      const { pathToFileURL } = await import('node:url')
      const url = pathToFileURL(`${this.modelDir}/model.json`).href
      this.model = await tf.loadGraphModel(url)
    }
    return this.model as {
      predict(input: unknown): { dataSync(): Float32Array; dispose(): void }
    }
  }

  async embed(batch: Float64Array[]): Promise<Float64Array[]> {
    const tf = await import('@tensorflow/tfjs')
    const model = await this.load()
    const flat = new Float32Array(batch.length * INPUT_SIZE * INPUT_SIZE * 3)
    batch.forEach((tensor, row) => flat.set(Float32Array.from(tensor), row * tensor.length))
    const input = tf.tensor4d(flat, [batch.length, INPUT_SIZE, INPUT_SIZE, 3])
    const output = model.predict(input)
    const values = output.dataSync()
    input.dispose()
    output.dispose()
    if (values.length !== batch.length * FEATURE_DIM) {
      throw new Error(
        `model produced ${values.length} values, expected ${batch.length * FEATURE_DIM}; ` +
          'is this a pool-layer feature model?',
      )
    }
    return batch.map((_, row) => {
      const features = new Float64Array(FEATURE_DIM)
      for (let k = 0; k < FEATURE_DIM; k++) features[k] = values[row * FEATURE_DIM + k]
      return features
    })
  }
}

export function makeBackbone(kind: string, modelDir?: string): Backbone {
  if (kind === 'projection') return new ProjectionBackbone()
  if (kind === 'inception') {
    if (!modelDir) {
      throw new Error(
        'inception backbone needs --model-dir pointing at a local tfjs graph model ' +
          '(weights are never downloaded); use --backbone projection for a ' +
          'deterministic weight-free stand-in',
      )
    }
    return new InceptionBackbone(modelDir)
  }
  throw new Error(`unknown backbone ${kind}`)
}
