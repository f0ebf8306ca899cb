/**
 * Training entry point: collect rollouts from the scheduler core over
 * the policy protocol, update the policy, persist checkpoints and a
 * training curve.
 *
 * Usage:
 *   node dist/train.js --dataset <dir> --out <ckpt-dir> [--core egsched]
 *     [--iterations N] [--rollout N] [--batch N] [--epochs N] [--seed N]
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { AgentConfig, DEFAULT_AGENT, validateConfig } from "./config.js";
import { ActorCritic, exportWeights } from "./model.js";
import { PPOTrainer, Transition } from "./ppo.js";
import { collectEpisodes, disposeEpisodes, makeRng, meanReturn } from "./rollout.js";

interface TrainArgs {
  dataset: string;
  out: string;
  core: string[];
  config: AgentConfig;
  resume?: string;
}

export function parseArgs(argv: string[]): TrainArgs {
  const get = (flag: string, fallback?: string): string | undefined => {
    const at = argv.indexOf(flag);
    return at >= 0 ? argv[at + 1] : fallback;
  };
  const dataset = get("--dataset");
  const out = get("--out");
  if (!dataset || !out) {
    throw new Error("need --dataset <dir> and --out <ckpt-dir>");
  }
  const config: AgentConfig = {
    ...DEFAULT_AGENT,
    iterations: Number(get("--iterations", String(DEFAULT_AGENT.iterations))),
    rolloutLength: Number(get("--rollout", String(DEFAULT_AGENT.rolloutLength))),
    batchSize: Number(get("--batch", String(DEFAULT_AGENT.batchSize))),
    epochsPerIteration: Number(get("--epochs", String(DEFAULT_AGENT.epochsPerIteration))),
    seed: Number(get("--seed", String(DEFAULT_AGENT.seed))),
  };
  validateConfig(config);
  return {
    dataset,
    out,
    core: (get("--core", "egsched") as string).split(" "),
    config,
    resume: get("--resume"),
  };
}

export function listTaskFiles(dir: string): string[] {
  const out: string[] = [];
  const walk = (current: string) => {
    for (const entry of fs.readdirSync(current, { withFileTypes: true }).sort(
        (a, b) => a.name.localeCompare(b.name))) {
      const full = path.join(current, entry.name);
      if (entry.isDirectory()) walk(full);
      else if (entry.name.startsWith("task_") && entry.name.endsWith(".json")) {
        out.push(full);
      }
    }
  };
  walk(dir);
  return out;
}

export async function train(args: TrainArgs): Promise<void> {
  const { config } = args;
  const tasks = listTaskFiles(args.dataset);
  if (tasks.length === 0) {
    throw new Error(`no task files under ${args.dataset}`);
  }
  fs.mkdirSync(args.out, { recursive: true });
  let model: ActorCritic;
  if (args.resume) {
    const { loadCheckpoint } = await import("./serve.js");
    model = loadCheckpoint(args.resume);
  } else {
    model = new ActorCritic({
      layers: config.encoderLayers,
      heads: config.attentionHeads,
      embedDim: config.embedDim,
      mlpHidden: config.mlpHidden,
      seed: config.seed,
    });
  }
  const trainer = new PPOTrainer(model, config);
  const rng = makeRng(config.seed * 7919 + 1);
  const curvePath = path.join(args.out, "curve.csv");
  fs.writeFileSync(curvePath, "iteration,episodes,env_steps,mean_return,loss\r\n");

  for (let iteration = 0; iteration < config.iterations; iteration++) {
    const transitions: Transition[] = [];
    const keep: Parameters<typeof disposeEpisodes>[0] = [];
    let episodeCount = 0;
    let returnSum = 0;
    // One core process sweeps the whole training split per pass; repeat
    // sweeps until the rollout quota is met (episodes stay whole).
    while (transitions.length < config.rolloutLength) {
      const episodes = await collectEpisodes(model, args.core, args.dataset,
                                             { sample: true, rng });
      for (const episode of episodes) {
        transitions.push(...episode.transitions);
        episodeCount += 1;
        returnSum += episode.rewardTotal;
      }
      keep.push(...episodes);
    }
    const stats = trainer.update(transitions);
    disposeEpisodes(keep);
    const mean = episodeCount ? returnSum / episodeCount : 0;
    fs.appendFileSync(
      curvePath,
      `${iteration},${episodeCount},${trainer.totalEnvSteps()},` +
      `${mean.toFixed(4)},${stats.loss.toFixed(6)}\r\n`);
    if (!Number.isFinite(stats.loss)) {
      const dump = path.join(args.out, `nan-dump-${iteration}.json`);
      fs.writeFileSync(dump, JSON.stringify({ iteration, stats }, null, 2));
      throw new Error(`non-finite loss at iteration ${iteration}; dump at ${dump}`);
    }
    fs.writeFileSync(path.join(args.out, "checkpoint.json"),
                     JSON.stringify(exportWeights(model)));
    fs.writeFileSync(path.join(args.out, "config.json"),
                     JSON.stringify(config, null, 2));
    console.log(`iteration ${iteration}: episodes=${episodeCount} ` +
                `mean_return=${mean.toFixed(3)} loss=${stats.loss.toFixed(4)}`);
  }
}

const isMain = process.argv[1] && process.argv[1].endsWith("train.js");
if (isMain) {
  train(parseArgs(process.argv.slice(2))).catch((error) => {
    console.error(String(error));
    process.exit(1);
  });
}
