#!/usr/bin/env node
// CLI: extract frame features and query vectors into TAGF files.
import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'

import { extractFeatures } from './extract.js'
import { loadModel } from './model.js'

async function run(): Promise<void> {
  await yargs(hideBin(process.argv))
    .command(
      'extract',
      'Extract TAGF features and query vectors from sampled frames',
      cmd => cmd
        .option('video', {
          type: 'string', demandOption: true,
          describe: 'Directory of frame files sampled at --fps',
        })
        .option('query', {
          type: 'string', array: true, demandOption: true,
          describe: 'Text query (repeatable)',
        })
        .option('fps', {
          type: 'number', default: 1.0,
          describe: 'Frame rate recorded in the TAGF header',
        })
        .option('out-dir', {
          type: 'string', demandOption: true,
        })
        .option('model', {
          type: 'string', default: 'stub',
          describe: 'Model id (stub[:D[:Q]])',
        }),
      args => {
        const model = loadModel(args.model)
        const outputs = extractFeatures({
          framesDir: args.video,
          queries: args.query as string[],
          frameRate: args.fps,
          outDir: args.outDir,
        }, model)
        for (const out of outputs) {
          console.log(`${out.queryId}: ${out.numFrames} frames x ${out.dim} ` +
            `-> ${out.featurePath} + ${out.queryPath}`)
        }
      })
    .demandCommand(1)
    .strict()
    .help()
    .parseAsync()
}

run().catch(err => {
  console.error(err instanceof Error ? err.message : err)
  process.exit(1)
})
