import { mkdtempSync, rmSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { afterEach, beforeEach, describe, expect, it } from 'vitest'

import {
  HEADER_SIZE, TAGF_VERSION, decodeTagf, encodeTagf, readTagf, writeQueryTagf,
  writeTagf,
} from '../src/tagf.js'

let dir: string
beforeEach(() => { dir = mkdtempSync(join(tmpdir(), 'tagf-')) })
afterEach(() => { rmSync(dir, { recursive: true, force: true }) })

describe('header layout', () => {
  it('writes an 18-byte little-endian header', () => {
    const buf = encodeTagf({
      rows: [new Float32Array([1, 2, 3]), new Float32Array([4, 5, 6])],
      frameRate: 2.5,
    })
    expect(HEADER_SIZE).toBe(18)
    expect(buf.length).toBe(18 + 4 * 2 * 3)
    expect(buf.toString('ascii', 0, 4)).toBe('TAGF')
    expect(buf.readUInt16LE(4)).toBe(TAGF_VERSION)
    expect(buf.readUInt32LE(6)).toBe(2)
    expect(buf.readUInt32LE(10)).toBe(3)
    expect(buf.readFloatLE(14)).toBeCloseTo(2.5, 6)
    // Row-major payload, first value at byte 18.
    expect(buf.readFloatLE(18)).toBe(1)
    expect(buf.readFloatLE(18 + 4 * 3)).toBe(4)
  })
})

describe('round trip', () => {
  it('is lossless for float32 data', () => {
    const rows = [
      new Float32Array([0.125, -3.5, 1e-6, 42]),
      new Float32Array([-0, 1.0000001, 9999.5, -1e20]),
    ]
    const path = join(dir, 'a.tagf')
    writeTagf(path, { rows, frameRate: 29.97 })
    const back = readTagf(path)
    expect(back.rows.length).toBe(2)
    expect(back.frameRate).toBeCloseTo(29.97, 4)
    back.rows.forEach((row, i) => {
      expect(Array.from(row)).toEqual(Array.from(rows[i]))
    })
  })

  it('stores queries as a 1 x D matrix', () => {
    const path = join(dir, 'q.tagf')
    writeQueryTagf(path, new Float32Array([1, 0, -1]))
    const back = readTagf(path)
    expect(back.rows.length).toBe(1)
    expect(Array.from(back.rows[0])).toEqual([1, 0, -1])
  })
})

describe('validation', () => {
  it('rejects bad magic', () => {
    const buf = encodeTagf({ rows: [new Float32Array([1])], frameRate: 1 })
    buf.write('NOPE', 0, 'ascii')
    expect(() => decodeTagf(buf)).toThrow(/bad magic/)
  })

  it('rejects truncated payloads', () => {
    const buf = encodeTagf({
      rows: [new Float32Array([1, 2])], frameRate: 1,
    })
    expect(() => decodeTagf(buf.subarray(0, buf.length - 1)))
      .toThrow(/size mismatch/)
  })

  it('rejects empty, ragged, and non-finite matrices', () => {
    expect(() => encodeTagf({ rows: [], frameRate: 1 })).toThrow(/one row/)
    expect(() => encodeTagf({
      rows: [new Float32Array([1, 2]), new Float32Array([3])], frameRate: 1,
    })).toThrow(/ragged/)
    expect(() => encodeTagf({
      rows: [new Float32Array([NaN])], frameRate: 1,
    })).toThrow(/non-finite/)
  })
})
