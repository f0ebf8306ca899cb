/**
 * Held-out evaluation: served policy's mean episode return (width
 * reduction) versus the core's uniform-random policy over many seeds.
 *
 * Usage:
 *   node dist/eval.js --checkpoint <dir> --tasks <dir> [--core egsched]
 *     [--seeds 30] [--out report.json]
 */

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import { loadCheckpoint, decide } from "./serve.js";
import { collectEpisodes, meanReturn } from "./rollout.js";
import { listTaskFiles } from "./train.js";
import { ActorCritic } from "./model.js";

export function randomPolicyReturns(
  core: string[],
  tasksDir: string,
  seeds: number,
): number[] {
  const means: number[] = [];
  for (let seed = 0; seed < seeds; seed++) {
    const stdout = execFileSync(
      core[0],
      [...core.slice(1), "egs", tasksDir, "--policy", "random",
       "--seed", String(seed)],
      { encoding: "utf-8" });
    const rewards = [...stdout.matchAll(/ reward (-?\d+)/g)]
      .map((m) => Number(m[1]));
    if (rewards.length === 0) {
      throw new Error("no rewards parsed from core output");
    }
    means.push(rewards.reduce((a, b) => a + b, 0) / rewards.length);
  }
  return means;
}

export async function servedPolicyReturn(
  model: ActorCritic,
  core: string[],
  tasksDir: string,
): Promise<number> {
  const episodes = await collectEpisodes(model, core, tasksDir, { sample: false });
  return meanReturn(episodes);
}

async function main(): Promise<void> {
  const argv = process.argv.slice(2);
  const get = (flag: string, fallback?: string) => {
    const at = argv.indexOf(flag);
    return at >= 0 ? argv[at + 1] : fallback;
  };
  const checkpoint = get("--checkpoint");
  const tasksDir = get("--tasks");
  if (!checkpoint || !tasksDir) {
    throw new Error("need --checkpoint <dir> and --tasks <dir>");
  }
  const core = (get("--core", "egsched") as string).split(" ");
  const seeds = Number(get("--seeds", "30"));
  const taskCount = listTaskFiles(tasksDir).length;

  const model = loadCheckpoint(checkpoint);
  const served = await servedPolicyReturn(model, core, tasksDir);
  const randomMeans = randomPolicyReturns(core, tasksDir, seeds);
  const randomMean = randomMeans.reduce((a, b) => a + b, 0) / randomMeans.length;
  const report = {
    tasks: taskCount,
    served_mean_return: served,
    random_mean_return: randomMean,
    random_seeds: seeds,
    served_at_least_random: served >= randomMean,
  };
  const out = get("--out");
  if (out) fs.writeFileSync(out, JSON.stringify(report, null, 2));
  console.log(JSON.stringify(report));
  if (!report.served_at_least_random) process.exit(1);
}

const isMain = process.argv[1] && process.argv[1].endsWith("eval.js");
if (isMain) {
  main().catch((error) => {
    console.error(String(error));
    process.exit(1);
  });
}

export { decide };
