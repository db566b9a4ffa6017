// Feature extraction: run the model over sampled frames, keep the learned
// query representation closest to the text embedding, and write TAGF files
// the grounding engine consumes directly.
import { readFileSync, readdirSync, statSync, mkdirSync } from 'fs'
import { basename, join } from 'path'

import { VisionLanguageModel, selectRepresentation } from './model.js'
import { writeQueryTagf, writeTagf } from './tagf.js'

export interface ExtractionJob {
  /** Directory of frame files, already sampled at `frameRate` fps. */
  framesDir: string
  queries: string[]
  frameRate: number
  outDir: string
}

export interface ExtractionOutput {
  queryId: string
  featurePath: string
  queryPath: string
  numFrames: number
  dim: number
}

export function listFrameFiles(framesDir: string): string[] {
  const stat = statSync(framesDir)
  if (!stat.isDirectory()) {
    throw new Error(
      `${framesDir} is not a directory; decode the video to frames first`)
  }
  const files = readdirSync(framesDir)
    .filter(name => !name.startsWith('.'))
    .sort()
    .map(name => join(framesDir, name))
  if (files.length === 0) throw new Error(`no frames in ${framesDir}`)
  return files
}

function slug(text: string, index: number): string {
  const cleaned = text.toLowerCase().replace(/[^a-z0-9]+/g, '-')
    .replace(/^-|-$/g, '').slice(0, 40)
  return `q${index}${cleaned ? '-' + cleaned : ''}`
}

/**
 * One feature file per (video, query) pair: representation selection is
 * conditioned on the query, so different queries may see different rows.
 */
export function extractFeatures(
  job: ExtractionJob,
  model: VisionLanguageModel,
): ExtractionOutput[] {
  if (job.queries.length === 0) throw new Error('at least one query required')
  if (!(job.frameRate > 0)) throw new Error('frame rate must be positive')
  mkdirSync(job.outDir, { recursive: true })
  const frames = listFrameFiles(job.framesDir).map(p => readFileSync(p))
  const perFrameReps = frames.map(bytes => model.frameRepresentations(bytes))
  const videoName = basename(job.framesDir)

  const outputs: ExtractionOutput[] = []
  job.queries.forEach((query, qi) => {
    const text = model.embedText(query)
    const rows = perFrameReps.map(reps => reps[selectRepresentation(reps, text)])
    const queryId = slug(query, qi)
    const featurePath = join(job.outDir, `${videoName}.${queryId}.features.tagf`)
    const queryPath = join(job.outDir, `${queryId}.query.tagf`)
    writeTagf(featurePath, { rows, frameRate: job.frameRate })
    writeQueryTagf(queryPath, text)
    outputs.push({
      queryId, featurePath, queryPath,
      numFrames: rows.length, dim: model.embedDim,
    })
  })
  return outputs
}

/** Embed caller-supplied paraphrases; one vector per text, shared dim. */
export function paraphraseEmbed(
  texts: string[],
  model: VisionLanguageModel,
): Float32Array[] {
  if (texts.length === 0) throw new Error('at least one text required')
  return texts.map(t => model.embedText(t))
}
