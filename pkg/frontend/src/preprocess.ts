/**
 * Backbone input preparation: bilinear resize to 224x224, scale to [0,1],
 * then standardize each channel with the ImageNet statistics published for
 * the pretrained network (recorded here verbatim for reproducibility).
 */
import * as tf from '@tensorflow/tfjs';

import { DecodedImage } from './image.js';

export const INPUT_SIZE = 224;
export const CHANNEL_MEAN = [0.485, 0.456, 0.406];
export const CHANNEL_STD = [0.229, 0.224, 0.225];

/** 224x224x3 standardized float tensor for one decoded image. */
export function preprocess(image: DecodedImage): tf.Tensor3D {
  if (image.width < 1 || image.height < 1) {
    throw new Error('zero-area image');
  }
  return tf.tidy(() => {
    const raw = tf.tensor3d(
      Float32Array.from(image.data),
      [image.height, image.width, 3],
      'float32',
    );
    const resized =
      image.height === INPUT_SIZE && image.width === INPUT_SIZE
        ? raw
        : tf.image.resizeBilinear(raw, [INPUT_SIZE, INPUT_SIZE]);
    const unit = resized.div<tf.Tensor3D>(255);
    return unit.sub(tf.tensor1d(CHANNEL_MEAN)).div<tf.Tensor3D>(tf.tensor1d(CHANNEL_STD));
  });
}

/** Stack preprocessed images into one n x 224 x 224 x 3 batch. */
export function preprocessBatch(images: DecodedImage[]): tf.Tensor4D {
  return tf.tidy(() => {
    const tensors = images.map(preprocess);
    return tf.stack(tensors) as tf.Tensor4D;
  });
}
