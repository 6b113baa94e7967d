/** Shared fixtures: deterministic PNGs and tiny seeded stand-in models. */
import * as fs from 'node:fs';
import * as path from 'node:path';

import * as tf from '@tensorflow/tfjs';
import { PNG } from 'pngjs';

import { FEATURE_DIM } from '../src/extractor';
import { saveLayersModel } from '../src/modelio';

export function writePng(
  filePath: string,
  width: number,
  height: number,
  pixel: (x: number, y: number) => [number, number, number],
): void {
  const png = new PNG({ width, height });
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const [r, g, b] = pixel(x, y);
      const i = (y * width + x) * 4;
      png.data[i] = r;
      png.data[i + 1] = g;
      png.data[i + 2] = b;
      png.data[i + 3] = 255;
    }
  }
  fs.mkdirSync(path.dirname(filePath), { recursive: true });
  fs.writeFileSync(filePath, PNG.sync.write(png));
}

/** Backbone stand-in: 224x224x3 -> 16x16x1664 feature maps (relu, seeded). */
export function buildBackboneStandIn(seed = 42): tf.LayersModel {
  const input = tf.input({ shape: [224, 224, 3] });
  const pooled = tf.layers
    .avgPooling2d({ poolSize: 14, strides: 14 })
    .apply(input) as tf.SymbolicTensor;
  const features = tf.layers
    .conv2d({
      filters: FEATURE_DIM,
      kernelSize: 1,
      activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({ seed }),
      biasInitializer: 'zeros',
    })
    .apply(pooled) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: features });
}

/** Classifier stand-in with a head, for Grad-CAM: 1x1 convs keep constant
 * inputs spatially uniform (no padding artifacts). */
export function buildClassifierStandIn(seed = 7, classes = 3): tf.LayersModel {
  const model = tf.sequential();
  model.add(tf.layers.avgPooling2d({ poolSize: 14, strides: 14, inputShape: [224, 224, 3] }));
  model.add(
    tf.layers.conv2d({
      filters: 8,
      kernelSize: 1,
      activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({ seed }),
    }),
  );
  model.add(
    tf.layers.conv2d({
      filters: 16,
      kernelSize: 1,
      activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1 }),
    }),
  );
  model.add(tf.layers.globalAveragePooling2d({}));
  model.add(
    tf.layers.dense({
      units: classes,
      activation: 'softmax',
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 2 }),
    }),
  );
  return model;
}

export async function saveModelTo(model: tf.LayersModel, dir: string): Promise<string> {
  return saveLayersModel(model, dir);
}
