import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

import * as tf from '@tensorflow/tfjs';
import { beforeAll, describe, expect, it } from 'vitest';

import { decodeImageFile } from '../src/image';
import { CHANNEL_MEAN, CHANNEL_STD, INPUT_SIZE, preprocess } from '../src/preprocess';
import { writePng } from './helpers';

beforeAll(async () => {
  await tf.setBackend('cpu');
});

const tmp = () => path.join(os.tmpdir(), `pp-${Math.random().toString(36).slice(2)}`);

describe('preprocess', () => {
  it('always produces 224x224x3', () => {
    for (const [w, h] of [
      [64, 48],
      [224, 224],
      [300, 500],
      [1, 1],
    ]) {
      const file = path.join(tmp(), 'img.png');
      writePng(file, w, h, (x, y) => [x % 256, y % 256, (x + y) % 256]);
      const out = preprocess(decodeImageFile(file));
      expect(out.shape).toEqual([INPUT_SIZE, INPUT_SIZE, 3]);
      out.dispose();
    }
  });

  it('maps an all-black image to (0 - mean) / std per channel', () => {
    const file = path.join(tmp(), 'black.png');
    writePng(file, 32, 32, () => [0, 0, 0]);
    const out = preprocess(decodeImageFile(file));
    const values = out.arraySync() as number[][][];
    for (let c = 0; c < 3; c++) {
      const expected = (0 - CHANNEL_MEAN[c]) / CHANNEL_STD[c];
      expect(values[0][0][c]).toBeCloseTo(expected, 6);
      expect(values[111][97][c]).toBeCloseTo(expected, 6);
    }
    expect(tf.util.flatten(values).every(Number.isFinite)).toBe(true);
    out.dispose();
  });

  it('preserves already-224 content up to the affine normalization', () => {
    const file = path.join(tmp(), 'full.png');
    writePng(file, INPUT_SIZE, INPUT_SIZE, (x, y) => [
      (x * 7) % 256,
      (y * 3) % 256,
      (x + 2 * y) % 256,
    ]);
    const image = decodeImageFile(file);
    const out = preprocess(image);
    const restored = tf.tidy(() =>
      out
        .mul(tf.tensor1d(CHANNEL_STD))
        .add(tf.tensor1d(CHANNEL_MEAN))
        .mul(255),
    );
    const diff = tf.tidy(() =>
      restored
        .sub(tf.tensor3d(Float32Array.from(image.data), [INPUT_SIZE, INPUT_SIZE, 3]))
        .abs()
        .max()
        .dataSync()[0],
    );
    expect(diff).toBeLessThan(1e-3);
    out.dispose();
    restored.dispose();
  });

  it('replicates grayscale to three equal channels', () => {
    const file = path.join(tmp(), 'gray.png');
    // equal RGB = what a grayscale decode produces
    writePng(file, 50, 40, (x, y) => {
      const v = (3 * x + 5 * y) % 256;
      return [v, v, v];
    });
    const out = preprocess(decodeImageFile(file));
    const [r, g, b] = tf.tidy(() => {
      const unit = out.mul(tf.tensor1d(CHANNEL_STD)).add(tf.tensor1d(CHANNEL_MEAN));
      return [
        unit.slice([0, 0, 0], [-1, -1, 1]).dataSync(),
        unit.slice([0, 0, 1], [-1, -1, 1]).dataSync(),
        unit.slice([0, 0, 2], [-1, -1, 1]).dataSync(),
      ];
    });
    for (let i = 0; i < r.length; i += 997) {
      expect(r[i]).toBeCloseTo(g[i], 5);
      expect(g[i]).toBeCloseTo(b[i], 5);
    }
    out.dispose();
  });

  it('rejects zero-area images', () => {
    expect(() =>
      preprocess({ width: 0, height: 10, data: new Uint8Array(0) }),
    ).toThrow(/zero-area/);
  });

  it('rejects undecodable files', () => {
    const file = path.join(tmp(), 'junk.png');
    writePng(file, 4, 4, () => [1, 2, 3]);
    fs.writeFileSync(file, Buffer.from('not a png at all'));
    expect(() => decodeImageFile(file)).toThrow(/cannot decode/);
  });
});
