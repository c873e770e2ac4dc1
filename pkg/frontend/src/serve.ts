/**
 * Request loop for the host protocol: one hello line, then one
 * {"id","scores"} response per {"id","text"} request, in order, until a
 * shutdown message or end of input. One JSON object per line, UTF-8.
 */

import { createInterface } from "node:readline";
import { TextClassifier } from "./model.js";

const PLUGIN_NAME = "calltide-finclf";
const PLUGIN_VERSION = "0.1.0";

function emit(obj: unknown) {
  process.stdout.write(JSON.stringify(obj) + "\n");
}

export function serve(model: TextClassifier): Promise<void> {
  emit({
    hello: {
      name: PLUGIN_NAME,
      version: PLUGIN_VERSION,
      max_tokens: model.config.maxTokens,
      wants: "raw",
    },
  });

  const lines = createInterface({ input: process.stdin, crlfDelay: Infinity });
  return new Promise((resolve) => {
    lines.on("line", (line) => {
      const trimmed = line.trim();
      if (!trimmed) return;
      let message: any;
      try {
        message = JSON.parse(trimmed);
      } catch {
        process.stderr.write(`ignoring non-JSON input line\n`);
        return;
      }
      if (message.shutdown) {
        lines.close();
        resolve();
        return;
      }
      if (typeof message.id !== "string" || typeof message.text !== "string") {
        process.stderr.write(`ignoring malformed request\n`);
        return;
      }
      emit({ id: message.id, scores: model.predictScores(message.text) });
    });
    lines.on("close", () => resolve());
  });
}
