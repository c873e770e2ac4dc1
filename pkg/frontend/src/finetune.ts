/**
 * Fine-tuning driver over the host's exported jsonl
 * ({"id","text","label","split"} per line).
 *
 * Emits one JSON log line per epoch with train/validation loss,
 * validation accuracy, and the class distribution of validation
 * predictions — the distribution line is what exposes the degenerate
 * all-one-class state that short training runs fall into on skewed data.
 */

import { readFileSync } from "node:fs";
import { DEFAULT_CONFIG, ModelConfig, TextClassifier, argmax, N_CLASSES } from "./model.js";

export interface ExampleRow {
  id: string;
  text: string;
  label: number;
  split: "train" | "validation" | "test";
}

export interface FinetuneOptions {
  epochs: number;
  batchSize: number;
  lr: number;
  classWeights: [number, number, number];
  plainAfter: number | null; // switch to uniform weights after this many epochs
  seed: number;
  maxTokens: number;
}

export const DEFAULT_FINETUNE: FinetuneOptions = {
  epochs: 10,
  batchSize: 32,
  lr: 0.01,
  classWeights: [1, 1, 1],
  plainAfter: null,
  seed: 7,
  maxTokens: DEFAULT_CONFIG.maxTokens,
};

export interface EpochLog {
  epoch: number;
  train_loss: number;
  val_loss: number;
  val_accuracy: number;
  val_pred_distribution: { "0": number; "1": number; "2": number };
}

export function readJsonl(path: string): ExampleRow[] {
  const rows: ExampleRow[] = [];
  for (const line of readFileSync(path, "utf-8").split("\n")) {
    if (!line.trim()) continue;
    const row = JSON.parse(line);
    if (typeof row.text !== "string" || ![0, 1, 2].includes(row.label)) {
      throw new Error(`malformed dataset row: ${line.slice(0, 120)}`);
    }
    rows.push(row as ExampleRow);
  }
  return rows;
}

export function finetune(
  rows: ExampleRow[],
  opts: FinetuneOptions,
  onEpoch?: (log: EpochLog) => void,
): { model: TextClassifier; logs: EpochLog[] } {
  const train = rows.filter((r) => r.split === "train");
  const val = rows.filter((r) => r.split === "validation");
  if (train.length === 0) {
    throw new Error("dataset has no train split");
  }
  const config: ModelConfig = { ...DEFAULT_CONFIG, maxTokens: opts.maxTokens, seed: opts.seed };
  const model = new TextClassifier(config);

  const encTrain = train.map((r) => model.encode(r.text));
  const labelsTrain = train.map((r) => r.label);
  const encVal = val.map((r) => model.encode(r.text));
  const labelsVal = val.map((r) => r.label);

  const uniform: [number, number, number] = [1, 1, 1];
  const logs: EpochLog[] = [];
  for (let epoch = 1; epoch <= opts.epochs; epoch++) {
    const weights =
      opts.plainAfter !== null && epoch > opts.plainAfter ? uniform : opts.classWeights;
    const trainLoss = model.trainEpoch(encTrain, labelsTrain, {
      lr: opts.lr,
      batchSize: opts.batchSize,
      classWeights: weights,
      shuffleSeed: opts.seed + epoch,
    });

    const distribution = { "0": 0, "1": 0, "2": 0 };
    let correct = 0;
    for (let i = 0; i < encVal.length; i++) {
      const scores = model.predictScores(val[i].text);
      const pred = argmax(scores);
      distribution[String(pred) as "0" | "1" | "2"] += 1;
      if (pred === labelsVal[i]) correct += 1;
    }
    const log: EpochLog = {
      epoch,
      train_loss: trainLoss,
      val_loss: model.meanLoss(encVal, labelsVal, uniform),
      val_accuracy: encVal.length ? correct / encVal.length : 0,
      val_pred_distribution: distribution,
    };
    logs.push(log);
    onEpoch?.(log);
  }
  return { model, logs };
}

/** Fraction of validation predictions landing in one class; 1.0 means the
 * model has collapsed to a single label. */
export function distributionPeak(log: EpochLog): number {
  const counts = [
    log.val_pred_distribution["0"],
    log.val_pred_distribution["1"],
    log.val_pred_distribution["2"],
  ];
  const total = counts.reduce((a, b) => a + b, 0);
  if (total === 0) return 0;
  return Math.max(...counts) / total;
}

export function labelCounts(rows: ExampleRow[]): number[] {
  const counts = new Array(N_CLASSES).fill(0);
  for (const row of rows) counts[row.label] += 1;
  return counts;
}
