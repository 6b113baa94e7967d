/**
 * Feature CSV emission.
 *
 * The header is exactly `f0,f1,...,f{d-1},label`, one row per image, every
 * cell a finite number. Class names go in the last column; names
 * containing commas, quotes or newlines are quoted RFC-4180 style. This is
 * byte-compatible with the selboost loader.
 */
import * as fs from 'node:fs';

import { FeatureRow } from './extractor.js';

function quoteField(text: string): string {
  if (/[",\r\n]/.test(text)) {
    return '"' + text.replace(/"/g, '""') + '"';
  }
  return text;
}

export function featureCsvHeader(dim: number): string {
  const names = [];
  for (let i = 0; i < dim; i++) names.push(`f${i}`);
  names.push('label');
  return names.join(',');
}

export function writeFeatureCsv(rows: FeatureRow[], outPath: string): void {
  if (rows.length === 0) {
    throw new Error('refusing to write an empty feature CSV (no rows)');
  }
  const dim = rows[0].values.length;
  const lines: string[] = [featureCsvHeader(dim)];
  for (const row of rows) {
    if (row.values.length !== dim) {
      throw new Error(
        `inconsistent row width: ${row.values.length} != ${dim}`,
      );
    }
    const cells = new Array<string>(dim + 1);
    for (let i = 0; i < dim; i++) {
      const value = row.values[i];
      if (!Number.isFinite(value)) {
        throw new Error(`non-finite feature value at column ${i}`);
      }
      cells[i] = String(value);
    }
    cells[dim] = quoteField(row.className);
    lines.push(cells.join(','));
  }
  fs.writeFileSync(outPath, lines.join('\n') + '\n', 'utf-8');
}
