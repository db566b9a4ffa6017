// TAGF binary feature files: "TAGF" magic, u16 version, u32 N, u32 D,
// f32 frame rate, then N*D f32 values row-major. All little-endian.
import { readFileSync, writeFileSync } from 'fs'

export const TAGF_MAGIC = 'TAGF'
export const TAGF_VERSION = 1
export const HEADER_SIZE = 18

export interface TagfMatrix {
  rows: Float32Array[]
  frameRate: number
}

export function encodeTagf(matrix: TagfMatrix): Buffer {
  const n = matrix.rows.length
  if (n < 1) throw new Error('TAGF matrix needs at least one row')
  const d = matrix.rows[0].length
  if (d < 1) throw new Error('TAGF matrix needs at least one column')
  if (!(matrix.frameRate > 0) || !Number.isFinite(matrix.frameRate)) {
    throw new Error(`invalid frame rate ${matrix.frameRate}`)
  }
  const buf = Buffer.alloc(HEADER_SIZE + 4 * n * d)
  buf.write(TAGF_MAGIC, 0, 'ascii')
  buf.writeUInt16LE(TAGF_VERSION, 4)
  buf.writeUInt32LE(n, 6)
  buf.writeUInt32LE(d, 10)
  buf.writeFloatLE(matrix.frameRate, 14)
  let offset = HEADER_SIZE
  for (const row of matrix.rows) {
    if (row.length !== d) throw new Error('ragged TAGF matrix')
    for (const value of row) {
      if (!Number.isFinite(value)) throw new Error('non-finite TAGF value')
      buf.writeFloatLE(value, offset)
      offset += 4
    }
  }
  return buf
}

export function writeTagf(path: string, matrix: TagfMatrix): void {
  writeFileSync(path, encodeTagf(matrix))
}

export function decodeTagf(buf: Buffer): TagfMatrix {
  if (buf.length < HEADER_SIZE) throw new Error('truncated TAGF header')
  if (buf.toString('ascii', 0, 4) !== TAGF_MAGIC) {
    throw new Error(`bad magic ${JSON.stringify(buf.toString('ascii', 0, 4))}`)
  }
  const version = buf.readUInt16LE(4)
  if (version !== TAGF_VERSION) throw new Error(`unsupported version ${version}`)
  const n = buf.readUInt32LE(6)
  const d = buf.readUInt32LE(10)
  const frameRate = buf.readFloatLE(14)
  if (n === 0 || d === 0) throw new Error(`empty matrix (N=${n}, D=${d})`)
  if (!(frameRate > 0)) throw new Error(`invalid frame rate ${frameRate}`)
  if (buf.length !== HEADER_SIZE + 4 * n * d) {
    throw new Error(`payload size mismatch: ${buf.length - HEADER_SIZE} bytes for N=${n} D=${d}`)
  }
  const rows: Float32Array[] = []
  for (let i = 0; i < n; i++) {
    const row = new Float32Array(d)
    for (let j = 0; j < d; j++) {
      row[j] = buf.readFloatLE(HEADER_SIZE + 4 * (i * d + j))
    }
    rows.push(row)
  }
  return { rows, frameRate }
}

export function readTagf(path: string): TagfMatrix {
  return decodeTagf(readFileSync(path))
}

export function writeQueryTagf(path: string, vector: Float32Array): void {
  // Query vectors are stored as a 1 x D matrix with a nominal frame rate.
  writeTagf(path, { rows: [vector], frameRate: 1.0 })
}
