/**
 * Feature extraction: run the pretrained backbone in inference mode and
 * global-average-pool the final feature maps down to one
 * 1664-dimensional row per image.
 */
import * as tf from '@tensorflow/tfjs';

import { DecodedImage, ImageRecord, decodeImageFile } from './image.js';
import { fileSystemLoad } from './modelio.js';
import { preprocessBatch } from './preprocess.js';

export const FEATURE_DIM = 1664;

export interface FeatureRow {
  values: Float32Array;
  className: string;
}

export interface ExtractionResult {
  rows: FeatureRow[];
  /** Files skipped because they failed to decode, with the reason. */
  skipped: Array<{ path: string; reason: string }>;
}

/**
 * Load the backbone from a local `model.json` path or an http(s) URL.
 * Layers models are tried first, then graph models.
 */
export async function loadFeatureModel(
  source: string,
): Promise<tf.LayersModel | tf.GraphModel> {
  const isUrl = /^https?:\/\//.test(source);
  const errors: string[] = [];
  if (isUrl) {
    try {
      return await tf.loadLayersModel(source);
    } catch (err) {
      errors.push(`layers: ${(err as Error).message}`);
    }
    try {
      return await tf.loadGraphModel(source);
    } catch (err) {
      errors.push(`graph: ${(err as Error).message}`);
    }
  } else {
    try {
      return await tf.loadLayersModel(fileSystemLoad(source));
    } catch (err) {
      errors.push(`layers: ${(err as Error).message}`);
    }
    try {
      return await tf.loadGraphModel(fileSystemLoad(source));
    } catch (err) {
      errors.push(`graph: ${(err as Error).message}`);
    }
  }
  throw new Error(`cannot load model from ${source}: ${errors.join('; ')}`);
}

/**
 * Forward one batch and pool: rank-4 backbone outputs are averaged over
 * the spatial dimensions; rank-2 outputs (models that already end in a
 * global pool) pass through. The width must be exactly FEATURE_DIM.
 */
export function extractBatch(
  model: tf.LayersModel | tf.GraphModel,
  batch: tf.Tensor4D,
  expectedDim = FEATURE_DIM,
): tf.Tensor2D {
  return tf.tidy(() => {
    let out = model.predict(batch) as tf.Tensor;
    if (Array.isArray(out)) {
      throw new Error('multi-output models are not supported');
    }
    if (out.rank === 4) {
      out = tf.mean(out, [1, 2]);
    }
    if (out.rank !== 2) {
      throw new Error(`unexpected model output rank ${out.rank}`);
    }
    const width = out.shape[1] as number;
    if (width !== expectedDim) {
      throw new Error(
        `backbone emits ${width} features per image, expected ${expectedDim}`,
      );
    }
    return out as tf.Tensor2D;
  });
}

/**
 * Decode, preprocess and extract every record, in the given order, in
 * batches. Decode failures are reported and skipped; the run continues.
 */
export async function extractFeatures(
  model: tf.LayersModel | tf.GraphModel,
  records: ImageRecord[],
  batchSize = 32,
  expectedDim = FEATURE_DIM,
  log: (message: string) => void = () => {},
): Promise<ExtractionResult> {
  if (batchSize < 1) {
    throw new Error(`batch size must be >= 1, got ${batchSize}`);
  }
  const rows: FeatureRow[] = [];
  const skipped: Array<{ path: string; reason: string }> = [];

  let pending: Array<{ image: DecodedImage; className: string }> = [];
  const flush = () => {
    if (pending.length === 0) return;
    const batch = preprocessBatch(pending.map((p) => p.image));
    const features = extractBatch(model, batch, expectedDim);
    const data = features.dataSync() as Float32Array;
    const width = features.shape[1];
    for (let i = 0; i < pending.length; i++) {
      rows.push({
        values: data.slice(i * width, (i + 1) * width),
        className: pending[i].className,
      });
    }
    batch.dispose();
    features.dispose();
    pending = [];
  };

  for (const record of records) {
    try {
      pending.push({ image: decodeImageFile(record.path), className: record.className });
    } catch (err) {
      const reason = (err as Error).message;
      skipped.push({ path: record.path, reason });
      log(`skipping ${record.path}: ${reason}`);
      continue;
    }
    if (pending.length === batchSize) flush();
  }
  flush();
  return { rows, skipped };
}
