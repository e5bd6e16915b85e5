/**
 * EMB1 binary cloud format.
 *
 * Layout (integers little-endian):
 *   "EMB1" | u16 version = 1 | u16 label length | UTF-8 label |
 *   u32 N | u32 n | u32 flags (bit 0 reserved, 0) |
 *   N*n float64 little-endian, row-major.
 */

export interface Cloud {
  label: string
  count: number
  dim: number
  /** row-major, length count*dim */
  data: Float64Array
}

const MAGIC = 'EMB1'
const VERSION = 1

export function encodeEmb1(cloud: Cloud): Buffer {
  if (cloud.count < 1 || cloud.dim < 1) {
    throw new Error(`refusing to write an empty cloud (N=${cloud.count}, n=${cloud.dim})`)
  }
  if (cloud.data.length !== cloud.count * cloud.dim) {
    throw new Error(
      `data length ${cloud.data.length} does not match N*n = ${cloud.count * cloud.dim}`,
    )
  }
  for (let i = 0; i < cloud.data.length; i++) {
    if (!Number.isFinite(cloud.data[i])) {
      throw new Error(
        `non-finite value at row ${Math.floor(i / cloud.dim)}, column ${i % cloud.dim}`,
      )
    }
  }
  const label = Buffer.from(cloud.label, 'utf-8')
  if (label.length > 0xffff) throw new Error('label exceeds 65535 UTF-8 bytes')
  const header = Buffer.alloc(8 + label.length + 12)
  header.write(MAGIC, 0, 'ascii')
  header.writeUInt16LE(VERSION, 4)
  header.writeUInt16LE(label.length, 6)
  label.copy(header, 8)
  let offset = 8 + label.length
  header.writeUInt32LE(cloud.count, offset)
  header.writeUInt32LE(cloud.dim, offset + 4)
  header.writeUInt32LE(0, offset + 8)
  const payload = Buffer.alloc(cloud.data.length * 8)
  for (let i = 0; i < cloud.data.length; i++) {
    payload.writeDoubleLE(cloud.data[i], i * 8)
  }
  return Buffer.concat([header, payload])
}

/** Parses an EMB1 buffer; used by the tests to close the round trip. */
export function decodeEmb1(raw: Buffer): Cloud {
  if (raw.length < 8 || raw.toString('ascii', 0, 4) !== MAGIC) {
    throw new Error('not an EMB1 buffer')
  }
  const version = raw.readUInt16LE(4)
  if (version !== VERSION) throw new Error(`unsupported version ${version}`)
  const labelLen = raw.readUInt16LE(6)
  const label = raw.toString('utf-8', 8, 8 + labelLen)
  let offset = 8 + labelLen
  const count = raw.readUInt32LE(offset)
  const dim = raw.readUInt32LE(offset + 4)
  const flags = raw.readUInt32LE(offset + 8)
  if (flags & 1) throw new Error('reserved flag bit set')
  offset += 12
  const expected = count * dim * 8
  if (raw.length - offset !== expected) {
    throw new Error(`payload is ${raw.length - offset} bytes, expected ${expected}`)
  }
  const data = new Float64Array(count * dim)
  for (let i = 0; i < data.length; i++) {
    data[i] = raw.readDoubleLE(offset + i * 8)
  }
  return { label, count, dim, data }
}
