/**
 * Command line:
 *
 *   extract --data-dir <dir> --out <csv> [--batch 32] [--device auto] [--model <path|url>]
 *   gradcam --image <path> --out <png> [--model <path|url>] [--class-index n]
 *
 * The model defaults to `models/densenet169/model.json` next to this
 * package; see the README for converting the pretrained weights into tfjs
 * format. `--device` is accepted for interface compatibility; the pure-JS
 * build always runs on the CPU backend.
 */
import * as path from 'node:path';
import * as url from 'node:url';

import * as tf from '@tensorflow/tfjs';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { writeFeatureCsv } from './csv.js';
import { FEATURE_DIM, extractFeatures, loadFeatureModel } from './extractor.js';
import { gradcam, renderOverlayPng } from './gradcam.js';
import { decodeImageFile, listImageFiles } from './image.js';

const HERE = path.dirname(url.fileURLToPath(import.meta.url));
const DEFAULT_MODEL = path.resolve(HERE, '..', 'models', 'densenet169', 'model.json');

async function runExtract(args: {
  dataDir: string;
  out: string;
  batch: number;
  model: string;
  device: string;
}): Promise<void> {
  await tf.setBackend('cpu');
  if (args.device !== 'auto' && args.device !== 'cpu') {
    console.warn(`device '${args.device}' unavailable in this build; using cpu`);
  }
  const records = listImageFiles(args.dataDir);
  console.error(`found ${records.length} images under ${args.dataDir}`);
  const model = await loadFeatureModel(args.model);
  const { rows, skipped } = await extractFeatures(
    model,
    records,
    args.batch,
    FEATURE_DIM,
    (message) => console.error(message),
  );
  if (skipped.length > 0) {
    console.error(`skipped ${skipped.length} undecodable file(s)`);
  }
  writeFeatureCsv(rows, args.out);
  console.error(`wrote ${rows.length} x ${FEATURE_DIM} features to ${args.out}`);
}

async function runGradcam(args: {
  image: string;
  out: string;
  model: string;
  classIndex?: number;
}): Promise<void> {
  await tf.setBackend('cpu');
  const model = await loadFeatureModel(args.model);
  if (!(model instanceof tf.LayersModel)) {
    throw new Error('gradcam needs a layers model with a classification head');
  }
  const image = decodeImageFile(args.image);
  const result = gradcam(model, image, args.classIndex);
  renderOverlayPng(image, result.heatmap, args.out);
  result.heatmap.dispose();
  console.error(
    `wrote ${args.out} (class ${result.classIndex}, score ${result.classScore.toFixed(4)})`,
  );
}

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .scriptName('xray-extract')
      .command(
        'extract',
        'extract pooled CNN features from a directory of images',
        (cmd) =>
          cmd
            .option('data-dir', { type: 'string', demandOption: true })
            .option('out', { type: 'string', demandOption: true })
            .option('batch', { type: 'number', default: 32 })
            .option('device', { type: 'string', default: 'auto' })
            .option('model', { type: 'string', default: DEFAULT_MODEL }),
        async (args) =>
          runExtract({
            dataDir: args['data-dir'] as string,
            out: args.out as string,
            batch: args.batch as number,
            model: args.model as string,
            device: args.device as string,
          }),
      )
      .command(
        'gradcam',
        'render a class-activation heatmap over one image',
        (cmd) =>
          cmd
            .option('image', { type: 'string', demandOption: true })
            .option('out', { type: 'string', demandOption: true })
            .option('model', { type: 'string', default: DEFAULT_MODEL })
            .option('class-index', { type: 'number' }),
        async (args) =>
          runGradcam({
            image: args.image as string,
            out: args.out as string,
            model: args.model as string,
            classIndex: args['class-index'] as number | undefined,
          }),
      )
      .demandCommand(1)
      .strict()
      .fail((message, err) => {
        throw err ?? new Error(message);
      })
      .parseAsync();
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1] ? path.resolve(process.argv[1]) : '';
if (entry === url.fileURLToPath(import.meta.url)) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
