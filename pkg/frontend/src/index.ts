export { DecodedImage, ImageRecord, decodeImageFile, listImageFiles } from './image.js';
export { CHANNEL_MEAN, CHANNEL_STD, INPUT_SIZE, preprocess, preprocessBatch } from './preprocess.js';
export { fileSystemLoad, saveLayersModel } from './modelio.js';
export {
  ExtractionResult,
  FEATURE_DIM,
  FeatureRow,
  extractBatch,
  extractFeatures,
  loadFeatureModel,
} from './extractor.js';
export { featureCsvHeader, writeFeatureCsv } from './csv.js';
export { GradCamResult, gradcam, renderOverlayPng } from './gradcam.js';
