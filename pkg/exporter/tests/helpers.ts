import { mkdirSync, writeFileSync } from 'node:fs'
import { join } from 'node:path'

import { PNG } from 'pngjs'

/** Writes a PNG whose pixel (x, y) is rgb(x, y) for a deterministic fill. */
export function writePng(
  dir: string,
  name: string,
  width: number,
  height: number,
  rgb: (x: number, y: number) => [number, number, number],
): string {
  const png = new PNG({ width, height })
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const i = (y * width + x) * 4
      const [r, g, b] = rgb(x, y)
      png.data[i] = r
      png.data[i + 1] = g
      png.data[i + 2] = b
      png.data[i + 3] = 255
    }
  }
  mkdirSync(dir, { recursive: true })
  const path = join(dir, name)
  writeFileSync(path, PNG.sync.write(png))
  return path
}

export function writeSolidFolder(dir: string, count: number, value = 128): void {
  for (let i = 0; i < count; i++) {
    writePng(dir, `img_${String(i).padStart(2, '0')}.png`, 8 + i, 6 + i, () => [
      value,
      value,
      value,
    ])
  }
}

export function writePpm(dir: string, name: string, width: number, height: number): string {
  mkdirSync(dir, { recursive: true })
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, 'latin1')
  const body = Buffer.alloc(width * height * 3)
  for (let i = 0; i < width * height; i++) {
    body[i * 3] = 255
    body[i * 3 + 1] = 0
    body[i * 3 + 2] = 0
  }
  const path = join(dir, name)
  writeFileSync(path, Buffer.concat([header, body]))
  return path
}
