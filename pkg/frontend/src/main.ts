#!/usr/bin/env node
/**
 * calltide-finclf — trainable sentiment classifier plugin.
 *
 *   calltide-finclf serve --checkpoint model.json
 *   calltide-finclf finetune --data dataset.jsonl --out model.json
 *       [--epochs 10] [--batch-size 32] [--lr 0.01]
 *       [--max-tokens 512|4096] [--class-weights w0,w1,w2]
 *       [--plain-after N] [--seed 7] [--log train_log.jsonl]
 *
 * `serve` exits nonzero before saying hello if the checkpoint cannot be
 * loaded. `finetune` prints one JSON log line per epoch to stdout.
 */

import { appendFileSync, writeFileSync } from "node:fs";
import { DEFAULT_FINETUNE, FinetuneOptions, finetune, readJsonl } from "./finetune.js";
import { TextClassifier } from "./model.js";
import { serve } from "./serve.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`cannot parse arguments near ${key ?? "end of line"}`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function requireFlag(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) throw new Error(`missing required flag --${name}`);
  return value;
}

async function cmdServe(argv: string[]): Promise<number> {
  const flags = parseFlags(argv);
  const path = requireFlag(flags, "checkpoint");
  let model: TextClassifier;
  try {
    model = TextClassifier.load(path);
  } catch (err) {
    // contract: unrecoverable load failure exits nonzero before hello
    process.stderr.write(`cannot load checkpoint ${path}: ${err}\n`);
    return 2;
  }
  await serve(model);
  return 0;
}

function cmdFinetune(argv: string[]): number {
  const flags = parseFlags(argv);
  const dataPath = requireFlag(flags, "data");
  const outPath = requireFlag(flags, "out");
  const opts: FinetuneOptions = { ...DEFAULT_FINETUNE };
  if (flags.has("epochs")) opts.epochs = Number(flags.get("epochs"));
  if (flags.has("batch-size")) opts.batchSize = Number(flags.get("batch-size"));
  if (flags.has("lr")) opts.lr = Number(flags.get("lr"));
  if (flags.has("seed")) opts.seed = Number(flags.get("seed"));
  if (flags.has("max-tokens")) opts.maxTokens = Number(flags.get("max-tokens"));
  if (flags.has("plain-after")) opts.plainAfter = Number(flags.get("plain-after"));
  if (flags.has("class-weights")) {
    const parts = flags.get("class-weights")!.split(",").map(Number);
    if (parts.length !== 3 || parts.some((w) => !Number.isFinite(w) || w <= 0)) {
      throw new Error("--class-weights needs three positive numbers w0,w1,w2");
    }
    opts.classWeights = [parts[0], parts[1], parts[2]];
  }
  if (![512, 4096].includes(opts.maxTokens)) {
    throw new Error("--max-tokens must be 512 or 4096");
  }

  const logPath = flags.get("log");
  if (logPath) writeFileSync(logPath, "");
  const rows = readJsonl(dataPath);
  const { model } = finetune(rows, opts, (log) => {
    const line = JSON.stringify(log);
    process.stdout.write(line + "\n");
    if (logPath) appendFileSync(logPath, line + "\n");
  });
  model.save(outPath);
  process.stderr.write(`checkpoint saved to ${outPath}\n`);
  return 0;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === "serve") return await cmdServe(rest);
    if (command === "finetune") return cmdFinetune(rest);
    process.stderr.write("usage: calltide-finclf <serve|finetune> [flags]\n");
    return 2;
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : err}\n`);
    return 2;
  }
}

main().then((code) => process.exit(code));
