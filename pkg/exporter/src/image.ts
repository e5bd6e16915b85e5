/**
 * Image decoding and resampling.
 *
 * Decoders normalize everything to RGB float64 in [0, 1]; grayscale inputs
 * are replicated across the three channels. PNG and JPEG come from pngjs /
 * jpeg-js, PPM/PGM (binary P5/P6) are parsed directly.
 */

import { readFileSync } from 'node:fs'
import { extname } from 'node:path'

import jpeg from 'jpeg-js'
import { PNG } from 'pngjs'

export interface RgbImage {
  width: number
  height: number
  /** row-major, 3 channels interleaved, values in [0, 1] */
  data: Float64Array
}

export function decodeImage(path: string): RgbImage {
  const ext = extname(path).toLowerCase()
  if (!['.png', '.jpg', '.jpeg', '.ppm', '.pgm'].includes(ext)) {
    throw new Error(`unsupported image extension ${ext || '(none)'}`)
  }
  const raw = readFileSync(path)
  if (ext === '.png') return fromRgba(PNG.sync.read(raw))
  if (ext === '.jpg' || ext === '.jpeg') return fromRgba(jpeg.decode(raw, { useTArray: true }))
  return decodePnm(raw)
}

function fromRgba(img: { width: number; height: number; data: Uint8Array | Buffer }): RgbImage {
  const { width, height } = img
  const out = new Float64Array(width * height * 3)
  for (let i = 0; i < width * height; i++) {
    out[i * 3] = img.data[i * 4] / 255
    out[i * 3 + 1] = img.data[i * 4 + 1] / 255
    out[i * 3 + 2] = img.data[i * 4 + 2] / 255
  }
  return { width, height, data: out }
}

function decodePnm(raw: Buffer): RgbImage {
  const header = raw.toString('latin1', 0, Math.min(raw.length, 512))
  const magic = header.slice(0, 2)
  if (magic !== 'P5' && magic !== 'P6') throw new Error(`unsupported PNM magic ${magic}`)
  const tokens: string[] = []
  let pos = 2
  while (tokens.length < 3 && pos < raw.length) {
    while (pos < raw.length && /\s/.test(String.fromCharCode(raw[pos]))) pos++
    if (String.fromCharCode(raw[pos]) === '#') {
      while (pos < raw.length && raw[pos] !== 0x0a) pos++
      continue
    }
    let token = ''
    while (pos < raw.length && !/\s/.test(String.fromCharCode(raw[pos]))) {
      token += String.fromCharCode(raw[pos])
      pos++
    }
    tokens.push(token)
  }
  pos++ // single whitespace after maxval
  const [width, height, maxval] = tokens.map(Number)
  if (!(width > 0 && height > 0 && maxval > 0 && maxval < 65536)) {
    throw new Error(`bad PNM header ${tokens.join(' ')}`)
  }
  const channels = magic === 'P6' ? 3 : 1
  const needed = width * height * channels
  if (raw.length - pos < needed) throw new Error('truncated PNM payload')
  const out = new Float64Array(width * height * 3)
  for (let i = 0; i < width * height; i++) {
    if (channels === 3) {
      out[i * 3] = raw[pos + i * 3] / maxval
      out[i * 3 + 1] = raw[pos + i * 3 + 1] / maxval
      out[i * 3 + 2] = raw[pos + i * 3 + 2] / maxval
    } else {
      const v = raw[pos + i] / maxval
      out[i * 3] = out[i * 3 + 1] = out[i * 3 + 2] = v
    }
  }
  return { width, height, data: out }
}

/**
 * Bilinear resampling with half-pixel-centered coordinates: target pixel i
 * samples the source at (i + 0.5) * scale - 0.5, clamped at the borders.
 */
export function resizeBilinear(img: RgbImage, width: number, height: number): RgbImage {
  if (img.width === width && img.height === height) return img
  const out = new Float64Array(width * height * 3)
  const scaleX = img.width / width
  const scaleY = img.height / height
  for (let y = 0; y < height; y++) {
    const sy = Math.min(Math.max((y + 0.5) * scaleY - 0.5, 0), img.height - 1)
    const y0 = Math.floor(sy)
    const y1 = Math.min(y0 + 1, img.height - 1)
    const fy = sy - y0
    for (let x = 0; x < width; x++) {
      const sx = Math.min(Math.max((x + 0.5) * scaleX - 0.5, 0), img.width - 1)
      const x0 = Math.floor(sx)
      const x1 = Math.min(x0 + 1, img.width - 1)
      const fx = sx - x0
      for (let c = 0; c < 3; c++) {
        const v00 = img.data[(y0 * img.width + x0) * 3 + c]
        const v01 = img.data[(y0 * img.width + x1) * 3 + c]
        const v10 = img.data[(y1 * img.width + x0) * 3 + c]
        const v11 = img.data[(y1 * img.width + x1) * 3 + c]
        const top = v00 + (v01 - v00) * fx
        const bottom = v10 + (v11 - v10) * fx
        out[(y * width + x) * 3 + c] = top + (bottom - top) * fy
      }
    }
  }
  return { width, height, data: out }
}

/** Unweighted channel mean, row-major H*W values in [0, 1]. */
export function toGrayscale(img: RgbImage): Float64Array {
  const out = new Float64Array(img.width * img.height)
  for (let i = 0; i < out.length; i++) {
    out[i] = (img.data[i * 3] + img.data[i * 3 + 1] + img.data[i * 3 + 2]) / 3
  }
  return out
}
