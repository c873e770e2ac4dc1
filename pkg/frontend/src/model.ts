/**
 * Compact trainable text classifier: hashed embedding bag with mean
 * pooling, one hidden layer, softmax over the three sentiment classes.
 * Pure TypeScript with hand-rolled Adam so the plugin has zero runtime
 * dependencies and deterministic behavior under a seeded PRNG.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { encode } from "./tokenizer.js";

export const N_CLASSES = 3;
export const CHECKPOINT_FORMAT = "finclf-checkpoint/1";

export interface ModelConfig {
  maxTokens: number; // declared sequence budget (512 or 4096 profile)
  vocabSize: number;
  dim: number; // embedding width
  hidden: number; // hidden layer width
  seed: number;
}

export const DEFAULT_CONFIG: ModelConfig = {
  maxTokens: 512,
  vocabSize: 2048,
  dim: 32,
  hidden: 32,
  seed: 1234,
};

/** mulberry32: tiny deterministic PRNG. */
export function rng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function softmax(z: Float64Array): Float64Array {
  let peak = -Infinity;
  for (const v of z) peak = Math.max(peak, v);
  const out = new Float64Array(z.length);
  let total = 0;
  for (let i = 0; i < z.length; i++) {
    out[i] = Math.exp(z[i] - peak);
    total += out[i];
  }
  for (let i = 0; i < z.length; i++) out[i] /= total;
  return out;
}

export function argmax(p: ArrayLike<number>): number {
  let best = 0;
  for (let i = 1; i < p.length; i++) if (p[i] > p[best]) best = i;
  return best;
}

interface AdamSlot {
  m: Float64Array;
  v: Float64Array;
}

export interface TrainOptions {
  lr: number;
  batchSize: number;
  classWeights: [number, number, number];
  shuffleSeed: number;
}

export class TextClassifier {
  config: ModelConfig;
  emb: Float64Array; // vocabSize x dim
  w1: Float64Array; // hidden x dim
  b1: Float64Array; // hidden
  w2: Float64Array; // 3 x hidden
  b2: Float64Array; // 3

  private slots: Map<string, AdamSlot> = new Map();
  private step = 0;

  constructor(config: ModelConfig) {
    this.config = config;
    const rand = rng(config.seed);
    const init = (n: number, scale: number) => {
      const a = new Float64Array(n);
      for (let i = 0; i < n; i++) a[i] = (rand() * 2 - 1) * scale;
      return a;
    };
    this.emb = init(config.vocabSize * config.dim, 0.1);
    this.w1 = init(config.hidden * config.dim, Math.sqrt(1 / config.dim));
    this.b1 = new Float64Array(config.hidden);
    this.w2 = init(N_CLASSES * config.hidden, Math.sqrt(1 / config.hidden));
    this.b2 = new Float64Array(N_CLASSES);
  }

  encode(text: string): Int32Array {
    return encode(text, this.config.maxTokens, this.config.vocabSize);
  }

  /** Mean-pooled embedding of the token ids. */
  private pool(ids: Int32Array): Float64Array {
    const { dim } = this.config;
    const x = new Float64Array(dim);
    if (ids.length === 0) return x;
    for (const id of ids) {
      const base = id * dim;
      for (let j = 0; j < dim; j++) x[j] += this.emb[base + j];
    }
    for (let j = 0; j < dim; j++) x[j] /= ids.length;
    return x;
  }

  private forward(ids: Int32Array): { x: Float64Array; h: Float64Array; p: Float64Array } {
    const { dim, hidden } = this.config;
    const x = this.pool(ids);
    const h = new Float64Array(hidden);
    for (let i = 0; i < hidden; i++) {
      let acc = this.b1[i];
      const row = i * dim;
      for (let j = 0; j < dim; j++) acc += this.w1[row + j] * x[j];
      h[i] = acc > 0 ? acc : 0;
    }
    const z = new Float64Array(N_CLASSES);
    for (let c = 0; c < N_CLASSES; c++) {
      let acc = this.b2[c];
      const row = c * hidden;
      for (let i = 0; i < hidden; i++) acc += this.w2[row + i] * h[i];
      z[c] = acc;
    }
    return { x, h, p: softmax(z) };
  }

  /** Class distribution for one text (sums to 1). */
  predictScores(text: string): [number, number, number] {
    const { p } = this.forward(this.encode(text));
    return [p[0], p[1], p[2]];
  }

  predict(text: string): number {
    return argmax(this.predictScores(text));
  }

  private slot(name: string, size: number): AdamSlot {
    let s = this.slots.get(name);
    if (!s) {
      s = { m: new Float64Array(size), v: new Float64Array(size) };
      this.slots.set(name, s);
    }
    return s;
  }

  private adam(name: string, param: Float64Array, grad: Float64Array, lr: number) {
    const { m, v } = this.slot(name, param.length);
    const b1 = 0.9;
    const b2 = 0.999;
    const eps = 1e-8;
    const t = this.step;
    for (let i = 0; i < param.length; i++) {
      if (grad[i] === 0 && m[i] === 0 && v[i] === 0) continue;
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      const mHat = m[i] / (1 - Math.pow(b1, t));
      const vHat = v[i] / (1 - Math.pow(b2, t));
      param[i] -= (lr * mHat) / (Math.sqrt(vHat) + eps);
    }
  }

  /**
   * One pass over the training set in seeded-shuffle order.
   * Returns the mean (weighted) cross-entropy loss.
   */
  trainEpoch(encoded: Int32Array[], labels: number[], opts: TrainOptions): number {
    const { dim, hidden } = this.config;
    const order = encoded.map((_, i) => i);
    const rand = rng(opts.shuffleSeed);
    for (let i = order.length - 1; i > 0; i--) {
      const j = Math.floor(rand() * (i + 1));
      [order[i], order[j]] = [order[j], order[i]];
    }

    let lossTotal = 0;
    for (let start = 0; start < order.length; start += opts.batchSize) {
      const batch = order.slice(start, start + opts.batchSize);
      const gEmb = new Map<number, Float64Array>();
      const gW1 = new Float64Array(this.w1.length);
      const gB1 = new Float64Array(hidden);
      const gW2 = new Float64Array(this.w2.length);
      const gB2 = new Float64Array(N_CLASSES);

      for (const idx of batch) {
        const ids = encoded[idx];
        const y = labels[idx];
        const weight = opts.classWeights[y];
        const { x, h, p } = this.forward(ids);
        lossTotal += -weight * Math.log(Math.max(p[y], 1e-12));

        const dz = new Float64Array(N_CLASSES);
        for (let c = 0; c < N_CLASSES; c++) {
          dz[c] = (weight * (p[c] - (c === y ? 1 : 0))) / batch.length;
        }
        const dh = new Float64Array(hidden);
        for (let c = 0; c < N_CLASSES; c++) {
          const row = c * hidden;
          gB2[c] += dz[c];
          for (let i = 0; i < hidden; i++) {
            gW2[row + i] += dz[c] * h[i];
            dh[i] += this.w2[row + i] * dz[c];
          }
        }
        const dx = new Float64Array(dim);
        for (let i = 0; i < hidden; i++) {
          if (h[i] <= 0) continue; // relu gate
          const row = i * dim;
          gB1[i] += dh[i];
          for (let j = 0; j < dim; j++) {
            gW1[row + j] += dh[i] * x[j];
            dx[j] += this.w1[row + j] * dh[i];
          }
        }
        if (ids.length > 0) {
          for (const id of ids) {
            let g = gEmb.get(id);
            if (!g) {
              g = new Float64Array(dim);
              gEmb.set(id, g);
            }
            for (let j = 0; j < dim; j++) g[j] += dx[j] / ids.length;
          }
        }
      }

      this.step += 1;
      this.adam("w1", this.w1, gW1, opts.lr);
      this.adam("b1", this.b1, gB1, opts.lr);
      this.adam("w2", this.w2, gW2, opts.lr);
      this.adam("b2", this.b2, gB2, opts.lr);
      // sparse embedding update, plain SGD-with-Adam-lr per touched row
      for (const [id, g] of gEmb) {
        const base = id * dim;
        for (let j = 0; j < dim; j++) this.emb[base + j] -= opts.lr * g[j];
      }
    }
    return lossTotal / encoded.length;
  }

  meanLoss(encoded: Int32Array[], labels: number[], classWeights: [number, number, number]): number {
    let total = 0;
    for (let i = 0; i < encoded.length; i++) {
      const { p } = this.forward(encoded[i]);
      total += -classWeights[labels[i]] * Math.log(Math.max(p[labels[i]], 1e-12));
    }
    return encoded.length ? total / encoded.length : 0;
  }

  save(path: string) {
    const payload = {
      format: CHECKPOINT_FORMAT,
      config: this.config,
      emb: Array.from(this.emb),
      w1: Array.from(this.w1),
      b1: Array.from(this.b1),
      w2: Array.from(this.w2),
      b2: Array.from(this.b2),
    };
    writeFileSync(path, JSON.stringify(payload));
  }

  static load(path: string): TextClassifier {
    const payload = JSON.parse(readFileSync(path, "utf-8"));
    if (payload.format !== CHECKPOINT_FORMAT) {
      throw new Error(`unrecognized checkpoint format in ${path}`);
    }
    const model = new TextClassifier(payload.config as ModelConfig);
    model.emb = Float64Array.from(payload.emb);
    model.w1 = Float64Array.from(payload.w1);
    model.b1 = Float64Array.from(payload.b1);
    model.w2 = Float64Array.from(payload.w2);
    model.b2 = Float64Array.from(payload.b2);
    return model;
  }
}
