/**
 * Image listing and decoding for the extractor.
 *
 * Dataset layout: `<data-dir>/<class-name>/*.png|jpg|jpeg`; the class name
 * of an image is its parent directory name. Decoding returns plain RGB
 * bytes so the rest of the pipeline is format-agnostic.
 */
import * as fs from 'node:fs';
import * as path from 'node:path';

import jpeg from 'jpeg-js';
import { PNG } from 'pngjs';

export interface DecodedImage {
  width: number;
  height: number;
  /** Row-major RGB bytes, length = width * height * 3. */
  data: Uint8Array;
}

export interface ImageRecord {
  path: string;
  className: string;
}

const IMAGE_EXTENSIONS = new Set(['.png', '.jpg', '.jpeg']);

/** All images under dataDir, sorted lexicographically by full path. */
export function listImageFiles(dataDir: string): ImageRecord[] {
  if (!fs.existsSync(dataDir) || !fs.statSync(dataDir).isDirectory()) {
    throw new Error(`data directory not found: ${dataDir}`);
  }
  const records: ImageRecord[] = [];
  for (const entry of fs.readdirSync(dataDir, { withFileTypes: true })) {
    if (!entry.isDirectory()) continue;
    const className = entry.name;
    if (className.length === 0) continue;
    const classDir = path.join(dataDir, className);
    for (const file of fs.readdirSync(classDir)) {
      if (IMAGE_EXTENSIONS.has(path.extname(file).toLowerCase())) {
        records.push({ path: path.join(classDir, file), className });
      }
    }
  }
  if (records.length === 0) {
    throw new Error(`no .png/.jpg/.jpeg files under ${dataDir}/<class-name>/`);
  }
  records.sort((a, b) => (a.path < b.path ? -1 : a.path > b.path ? 1 : 0));
  return records;
}

function rgbaToRgb(data: Uint8Array, pixels: number): Uint8Array {
  const rgb = new Uint8Array(pixels * 3);
  for (let p = 0; p < pixels; p++) {
    rgb[p * 3] = data[p * 4];
    rgb[p * 3 + 1] = data[p * 4 + 1];
    rgb[p * 3 + 2] = data[p * 4 + 2];
  }
  return rgb;
}

/** Decode one PNG or JPEG file to RGB bytes (grayscale comes back replicated). */
export function decodeImageFile(filePath: string): DecodedImage {
  const buffer = fs.readFileSync(filePath);
  const ext = path.extname(filePath).toLowerCase();
  let width: number;
  let height: number;
  let rgba: Uint8Array;
  try {
    if (ext === '.png') {
      const png = PNG.sync.read(buffer);
      width = png.width;
      height = png.height;
      rgba = new Uint8Array(png.data.buffer, png.data.byteOffset, png.data.length);
    } else if (ext === '.jpg' || ext === '.jpeg') {
      const decoded = jpeg.decode(buffer, { useTArray: true, maxMemoryUsageInMB: 1024 });
      width = decoded.width;
      height = decoded.height;
      rgba = decoded.data;
    } else {
      throw new Error(`unsupported extension ${ext}`);
    }
  } catch (err) {
    throw new Error(`cannot decode ${filePath}: ${(err as Error).message}`);
  }
  if (width < 1 || height < 1) {
    throw new Error(`zero-area image: ${filePath}`);
  }
  return { width, height, data: rgbaToRgb(rgba, width * height) };
}
