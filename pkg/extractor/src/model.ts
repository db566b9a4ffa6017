// Vision-language model behind a thin interface, so the extractor is
// testable without real weights. Each frame yields one representation per
// learned query token; the caller picks the one most aligned with the text.
import { createHash } from 'crypto'

export interface VisionLanguageModel {
  readonly embedDim: number
  readonly numLearnedQueries: number
  /** Deterministic text embedding. */
  embedText(text: string): Float32Array
  /** One image representation per learned query token. */
  frameRepresentations(frameBytes: Uint8Array): Float32Array[]
}

/**
 * Deterministic stand-in model: embeddings are unit-norm pseudo-random
 * vectors seeded from a SHA-256 of the input, so identical inputs always
 * map to identical vectors and no weights are needed.
 */
export class StubModel implements VisionLanguageModel {
  constructor(
    readonly embedDim: number = 32,
    readonly numLearnedQueries: number = 4,
  ) {
    if (embedDim < 1 || numLearnedQueries < 1) {
      throw new Error('embedDim and numLearnedQueries must be >= 1')
    }
  }

  embedText(text: string): Float32Array {
    return hashVector(`text:${text}`, this.embedDim)
  }

  frameRepresentations(frameBytes: Uint8Array): Float32Array[] {
    const digest = createHash('sha256').update(frameBytes).digest('hex')
    const reps: Float32Array[] = []
    for (let q = 0; q < this.numLearnedQueries; q++) {
      reps.push(hashVector(`frame:${digest}:query:${q}`, this.embedDim))
    }
    return reps
  }
}

function hashVector(seed: string, dim: number): Float32Array {
  const out = new Float32Array(dim)
  let counter = 0
  let filled = 0
  while (filled < dim) {
    const digest = createHash('sha256').update(`${seed}:${counter++}`).digest()
    for (let i = 0; i + 4 <= digest.length && filled < dim; i += 4) {
      // Map 32 bits to (-1, 1).
      out[filled++] = (digest.readUInt32LE(i) / 0x80000000) - 1
    }
  }
  let norm = 0
  for (const v of out) norm += v * v
  norm = Math.sqrt(norm)
  if (norm > 0) for (let i = 0; i < dim; i++) out[i] /= norm
  return out
}

export function dot(a: Float32Array, b: Float32Array): number {
  if (a.length !== b.length) {
    throw new Error(`dimension mismatch: ${a.length} vs ${b.length}`)
  }
  let acc = 0
  for (let i = 0; i < a.length; i++) acc += a[i] * b[i]
  return acc
}

/** Index of the representation most similar to the text embedding. */
export function selectRepresentation(
  representations: Float32Array[],
  textEmbedding: Float32Array,
): number {
  if (representations.length === 0) throw new Error('no representations')
  let best = 0
  let bestSim = -Infinity
  representations.forEach((rep, i) => {
    const sim = dot(rep, textEmbedding)
    if (sim > bestSim) {
      bestSim = sim
      best = i
    }
  })
  return best
}

export function loadModel(id: string): VisionLanguageModel {
  // Only the deterministic stub ships here; real backends plug in via the
  // VisionLanguageModel interface. "stub[:D[:Q]]" sets dim / query count.
  const parts = id.split(':')
  if (parts[0] !== 'stub') {
    throw new Error(`unknown model ${JSON.stringify(id)}; available: stub[:D[:Q]]`)
  }
  const dim = parts.length > 1 ? parseInt(parts[1], 10) : 32
  const queries = parts.length > 2 ? parseInt(parts[2], 10) : 4
  return new StubModel(dim, queries)
}
