/**
 * Serve a trained policy to the core over stdio (child-process mode) or
 * TCP. Serving is deterministic: the argmax-probability eligible edge.
 *
 * Usage:
 *   node dist/serve.js --checkpoint <dir-or-json> [--tcp]
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { disposeObservation, encodeObservation } from "./features.js";
import { ActorCritic, CheckpointWeights, importWeights } from "./model.js";
import { ObserveMessage, PolicyServer, serveStdio } from "./protocol.js";
import { argmaxIndex } from "./rollout.js";

export function loadCheckpoint(target: string): ActorCritic {
  const file = fs.statSync(target).isDirectory()
    ? path.join(target, "checkpoint.json")
    : target;
  const payload = JSON.parse(fs.readFileSync(file, "utf-8")) as CheckpointWeights;
  return importWeights(payload);
}

export function decide(model: ActorCritic, message: ObserveMessage): number {
  const obs = encodeObservation(message);
  try {
    const probs = model.actionProbs(obs);
    const index = argmaxIndex(Array.from(probs.dataSync()));
    probs.dispose();
    return index;
  } finally {
    disposeObservation(obs);
  }
}

async function main(): Promise<void> {
  const argv = process.argv.slice(2);
  const at = argv.indexOf("--checkpoint");
  if (at < 0) {
    throw new Error("need --checkpoint <dir-or-json>");
  }
  const model = loadCheckpoint(argv[at + 1]);
  if (argv.includes("--tcp")) {
    const server = new PolicyServer(
      (message, reply) => reply(decide(model, message)),
      () => undefined,
    );
    const port = await server.listen();
    console.log(`listening on 127.0.0.1:${port}`);
    return new Promise(() => undefined); // runs until killed
  }
  await serveStdio((message) => decide(model, message));
}

const isMain = process.argv[1] && process.argv[1].endsWith("serve.js");
if (isMain) {
  main().catch((error) => {
    console.error(String(error));
    process.exit(1);
  });
}
