/**
 * Filesystem persistence for tfjs models.
 *
 * The pure-JS tfjs build has no `file://` IO handler in Node (that ships
 * with the native bindings), so this module provides a minimal one: a
 * `model.json` with inlined weightsManifest plus binary shard files next
 * to it.
 */
import * as fs from 'node:fs';
import * as path from 'node:path';

import * as tf from '@tensorflow/tfjs';

function concatBuffers(buffers: ArrayBuffer[]): ArrayBuffer {
  const total = buffers.reduce((n, b) => n + b.byteLength, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const buffer of buffers) {
    out.set(new Uint8Array(buffer), offset);
    offset += buffer.byteLength;
  }
  return out.buffer;
}

/** Load handler for a `model.json` (shards resolved relative to it). */
export function fileSystemLoad(modelJsonPath: string): tf.io.IOHandler {
  return {
    async load(): Promise<tf.io.ModelArtifacts> {
      if (!fs.existsSync(modelJsonPath)) {
        throw new Error(`no such model file: ${modelJsonPath}`);
      }
      const dir = path.dirname(modelJsonPath);
      const config = JSON.parse(fs.readFileSync(modelJsonPath, 'utf-8'));
      const manifest = (config.weightsManifest ?? []) as Array<{
        paths: string[];
        weights: tf.io.WeightsManifestEntry[];
      }>;
      const weightSpecs: tf.io.WeightsManifestEntry[] = [];
      const buffers: ArrayBuffer[] = [];
      for (const group of manifest) {
        weightSpecs.push(...group.weights);
        for (const shard of group.paths) {
          const bytes = fs.readFileSync(path.join(dir, shard));
          buffers.push(
            bytes.buffer.slice(bytes.byteOffset, bytes.byteOffset + bytes.byteLength),
          );
        }
      }
      return {
        modelTopology: config.modelTopology,
        format: config.format,
        generatedBy: config.generatedBy,
        convertedBy: config.convertedBy,
        weightSpecs,
        weightData: concatBuffers(buffers),
      };
    },
  };
}

/** Save a LayersModel as `<dir>/model.json` + `<dir>/weights.bin`. */
export async function saveLayersModel(model: tf.LayersModel, dir: string): Promise<string> {
  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts: tf.io.ModelArtifacts) => {
      const weightData = artifacts.weightData as ArrayBuffer;
      fs.writeFileSync(path.join(dir, 'weights.bin'), Buffer.from(weightData));
      const config = {
        format: 'layers-model',
        generatedBy: 'xray-feature-extractor',
        convertedBy: null,
        modelTopology: artifacts.modelTopology,
        weightsManifest: [
          { paths: ['weights.bin'], weights: artifacts.weightSpecs },
        ],
      };
      fs.writeFileSync(path.join(dir, 'model.json'), JSON.stringify(config));
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON',
        },
      };
    }),
  );
  return path.join(dir, 'model.json');
}
