import { describe, expect, it } from "vitest";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import {
  DEFAULT_FINETUNE,
  distributionPeak,
  finetune,
  labelCounts,
  readJsonl,
} from "../src/finetune.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");
const BALANCED = readJsonl(join(FIXTURES, "synthetic_300.jsonl"));
const SKEWED = readJsonl(join(FIXTURES, "skew_300.jsonl"));

describe("dataset loading", () => {
  it("reads the export schema", () => {
    expect(BALANCED.length).toBe(300);
    expect(labelCounts(BALANCED)).toEqual([100, 100, 100]);
    const splits = new Set(BALANCED.map((r) => r.split));
    expect(splits).toEqual(new Set(["train", "validation", "test"]));
  });

  it("skewed fixture is dominated by the positive class", () => {
    const counts = labelCounts(SKEWED);
    expect(counts[2] / 300).toBeGreaterThan(0.85);
  });
});

describe("finetune on the separable corpus", () => {
  it("reaches validation accuracy >= 0.9 within 3 epochs", () => {
    const { logs } = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 3 });
    const best = Math.max(...logs.map((l) => l.val_accuracy));
    expect(best).toBeGreaterThanOrEqual(0.9);
  });

  it("training loss decreases over 3 epochs", () => {
    const { logs } = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 3 });
    expect(logs[1].train_loss).toBeLessThan(logs[0].train_loss);
    expect(logs[2].train_loss).toBeLessThan(logs[1].train_loss);
  });

  it("logs one line per epoch with losses, accuracy and distribution", () => {
    const { logs } = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 2 });
    expect(logs.map((l) => l.epoch)).toEqual([1, 2]);
    for (const log of logs) {
      expect(log.train_loss).toBeGreaterThan(0);
      expect(log.val_loss).toBeGreaterThan(0);
      const d = log.val_pred_distribution;
      expect(d["0"] + d["1"] + d["2"]).toBeGreaterThan(0);
    }
  });

  it("is deterministic for a fixed seed", () => {
    const a = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 2 });
    const b = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 2 });
    expect(a.logs).toEqual(b.logs);
  });
});

describe("degenerate-state diagnostics", () => {
  it("one epoch on a 90%-positive set collapses to all-positive, visible in the log", () => {
    const { logs } = finetune(SKEWED, { ...DEFAULT_FINETUNE, epochs: 1 });
    const log = logs[0];
    // every validation prediction lands in the positive class
    expect(log.val_pred_distribution["2"]).toBeGreaterThan(0);
    expect(distributionPeak(log)).toBeGreaterThanOrEqual(0.9);
    expect(
      log.val_pred_distribution["2"] /
        (log.val_pred_distribution["0"] +
          log.val_pred_distribution["1"] +
          log.val_pred_distribution["2"]),
    ).toBeGreaterThanOrEqual(0.9);
  });

  it("a balanced run does not trip the collapse diagnostic", () => {
    const { logs } = finetune(BALANCED, { ...DEFAULT_FINETUNE, epochs: 3 });
    expect(distributionPeak(logs[logs.length - 1])).toBeLessThan(0.5);
  });
});

describe("loss-schedule flag", () => {
  it("weighted epochs then plain epochs changes the trajectory", () => {
    const weighted = finetune(SKEWED, {
      ...DEFAULT_FINETUNE,
      epochs: 4,
      classWeights: [8, 8, 1], // heavy penalty for missing minority classes
      plainAfter: 2,
    });
    const plain = finetune(SKEWED, { ...DEFAULT_FINETUNE, epochs: 4 });
    expect(weighted.logs[0].train_loss).not.toBe(plain.logs[0].train_loss);
    // after the switch the weighted run trains on uniform loss: comparable scale
    expect(weighted.logs[3].train_loss).toBeGreaterThan(0);
  });

  it("weighted loss lifts minority recall on the skewed set", () => {
    const plain = finetune(SKEWED, { ...DEFAULT_FINETUNE, epochs: 6 });
    const weighted = finetune(SKEWED, {
      ...DEFAULT_FINETUNE,
      epochs: 6,
      classWeights: [8, 8, 1],
    });
    const minority = (m: typeof plain) => {
      const val = SKEWED.filter((r) => r.split === "validation");
      let hits = 0;
      let total = 0;
      for (const row of val) {
        if (row.label === 2) continue;
        total += 1;
        if (m.model.predict(row.text) === row.label) hits += 1;
      }
      return total ? hits / total : 0;
    };
    expect(minority(weighted)).toBeGreaterThanOrEqual(minority(plain));
  });
});
