/**
 * Gradient-weighted class activation maps.
 *
 * The map targets the model's own classification head (by default its most
 * probable class): channel weights are the spatial means of the class
 * score's gradient with respect to the last convolutional feature maps,
 * the weighted sum is rectified, normalized to [0,1], and upsampled to the
 * network input size. Works for layers models whose layers after the last
 * rank-4 output form a simple chain (convolutional backbone + pooled head).
 */
import * as fs from 'node:fs';

import * as tf from '@tensorflow/tfjs';
import { PNG } from 'pngjs';

import { DecodedImage } from './image.js';
import { INPUT_SIZE, preprocess } from './preprocess.js';

export interface GradCamResult {
  /** INPUT_SIZE x INPUT_SIZE heatmap, values in [0, 1]. */
  heatmap: tf.Tensor2D;
  classIndex: number;
  classScore: number;
}

function lastSpatialLayerIndex(model: tf.LayersModel): number {
  for (let i = model.layers.length - 1; i >= 0; i--) {
    const shape = model.layers[i].outputShape;
    if (Array.isArray(shape) && !Array.isArray(shape[0]) && shape.length === 4) {
      return i;
    }
  }
  throw new Error('model has no rank-4 (spatial) layer output to attribute to');
}

function applyHead(model: tf.LayersModel, from: number, features: tf.Tensor): tf.Tensor {
  let out: tf.Tensor = features;
  for (let i = from; i < model.layers.length; i++) {
    const layer = model.layers[i];
    if (layer.inboundNodes.length !== 1) {
      throw new Error('model head is not a simple layer chain; Grad-CAM unsupported');
    }
    out = layer.apply(out) as tf.Tensor;
  }
  return out;
}

export function gradcam(
  model: tf.LayersModel,
  image: DecodedImage,
  classIndex?: number,
): GradCamResult {
  const convIndex = lastSpatialLayerIndex(model);
  const featureModel = tf.model({
    inputs: model.inputs,
    outputs: model.layers[convIndex].output as tf.SymbolicTensor,
  });

  const { heatmap, pickedClass, score } = tf.tidy(() => {
    const input = preprocess(image).expandDims(0);
    const features = featureModel.predict(input) as tf.Tensor4D;
    const logits = applyHead(model, convIndex + 1, features).reshape([-1]);
    const picked =
      classIndex ?? (logits.argMax().dataSync()[0] as number);
    if (picked < 0 || picked >= logits.shape[0]) {
      throw new Error(
        `class index ${picked} out of range for ${logits.shape[0]} outputs`,
      );
    }
    const classScore = logits.gather([picked]).dataSync()[0];

    const scoreOf = (f: tf.Tensor) =>
      applyHead(model, convIndex + 1, f).reshape([-1]).gather([picked]).sum();
    const grads = tf.grad(scoreOf)(features);

    const alpha = grads.mean([1, 2]); // 1 x channels
    const channels = features.shape[3] as number;
    const weighted = features.mul(alpha.reshape([1, 1, 1, channels]));
    const cam = tf.relu(weighted.sum(-1)).squeeze([0]) as tf.Tensor2D;

    const min = cam.min();
    const range = cam.max().sub(min);
    const normalized = cam.sub(min).div(range.add(1e-8)) as tf.Tensor2D;
    const upsampled = tf.image
      .resizeBilinear(normalized.expandDims(-1) as tf.Tensor3D, [INPUT_SIZE, INPUT_SIZE])
      .squeeze([2]) as tf.Tensor2D;
    return {
      heatmap: tf.keep(upsampled.clipByValue(0, 1) as tf.Tensor2D),
      pickedClass: picked,
      score: classScore,
    };
  });
  return { heatmap, classIndex: pickedClass, classScore: score };
}

/** Blend the heatmap (red hot / blue cold) over the resized input; save PNG. */
export function renderOverlayPng(
  image: DecodedImage,
  heatmap: tf.Tensor2D,
  outPath: string,
): void {
  const gray = tf.tidy(() => {
    const raw = tf.tensor3d(Float32Array.from(image.data), [image.height, image.width, 3]);
    const resized = tf.image.resizeBilinear(raw, [INPUT_SIZE, INPUT_SIZE]);
    return resized.mean(-1).dataSync() as Float32Array;
  });
  const cam = heatmap.dataSync() as Float32Array;

  const png = new PNG({ width: INPUT_SIZE, height: INPUT_SIZE });
  for (let p = 0; p < INPUT_SIZE * INPUT_SIZE; p++) {
    const base = gray[p];
    const heat = cam[p];
    png.data[p * 4] = Math.round(0.5 * base + 0.5 * 255 * heat);
    png.data[p * 4 + 1] = Math.round(0.5 * base);
    png.data[p * 4 + 2] = Math.round(0.5 * base + 0.5 * 255 * (1 - heat));
    png.data[p * 4 + 3] = 255;
  }
  fs.writeFileSync(outPath, PNG.sync.write(png));
}
