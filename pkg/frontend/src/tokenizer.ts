/**
 * Hashing word tokenizer.
 *
 * Words are lowercased, split on non-alphanumerics, truncated to the
 * model's declared sequence budget, and hashed into a fixed id space with
 * FNV-1a so no vocabulary file ships with the checkpoint.
 */

export const PAD_BUCKETS = 0; // reserved for future special ids

export function words(text: string): string[] {
  return text.toLowerCase().split(/[^a-z0-9']+/).filter((w) => w.length > 0);
}

function fnv1a(word: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < word.length; i++) {
    hash ^= word.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** Token ids for `text`, truncated to at most `maxTokens` words. */
export function encode(text: string, maxTokens: number, vocabSize: number): Int32Array {
  const ws = words(text);
  const n = Math.min(ws.length, maxTokens);
  const ids = new Int32Array(n);
  for (let i = 0; i < n; i++) {
    ids[i] = fnv1a(ws[i]) % vocabSize;
  }
  return ids;
}
