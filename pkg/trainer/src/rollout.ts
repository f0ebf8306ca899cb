/**
 * Rollout collection: a TCP policy server paired with scheduler-core
 * subprocesses. Each core connection is one episode; per-step rewards
 * are recovered from consecutive observation widths plus the episode
 * total.
 */

import { spawn } from "node:child_process";
import * as tf from "@tensorflow/tfjs";
import { encodeObservation } from "./features.js";
import { ActorCritic } from "./model.js";
import { ObserveMessage, PolicyServer } from "./protocol.js";
import { Transition } from "./ppo.js";

export interface EpisodeResult {
  transitions: Transition[];
  rewardTotal: number;
  initialWidth: number;
}

export interface Sampler {
  (probs: number[]): number;
}

export function sampleIndex(probs: number[], uniform: number): number {
  let acc = 0;
  for (let i = 0; i < probs.length; i++) {
    acc += probs[i];
    if (uniform < acc) return i;
  }
  return probs.length - 1;
}

export function argmaxIndex(probs: number[]): number {
  let best = 0;
  for (let i = 1; i < probs.length; i++) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

/** Deterministic uniform stream for reproducible sampling. */
export function makeRng(seed: number): () => number {
  let state = (seed >>> 0) || 1;
  return () => {
    state ^= state << 13; state >>>= 0;
    state ^= state >> 17;
    state ^= state << 5; state >>>= 0;
    return state / 0x100000000;
  };
}

/**
 * Serve the model over TCP and run the core once against a task file or
 * directory; resolves with one EpisodeResult per completed episode.
 */
export function collectEpisodes(
  model: ActorCritic,
  coreCommand: string[],
  taskPath: string,
  options: { sample: boolean; rng?: () => number; timeoutMs?: number } = { sample: true },
): Promise<EpisodeResult[]> {
  const episodes: EpisodeResult[] = [];
  let current: Transition[] = [];
  let lastWidth = 0;
  let initialWidth = 0;
  let violations = 0;

  const server = new PolicyServer(
    (message: ObserveMessage, reply) => {
      const obs = encodeObservation(message);
      if (current.length === 0) {
        initialWidth = message.width;
      } else {
        // Reward of the previous action is the width drop it achieved.
        current[current.length - 1].reward = lastWidth - message.width;
      }
      lastWidth = message.width;
      const probsT = model.actionProbs(obs);
      const probs = Array.from(probsT.dataSync());
      probsT.dispose();
      const valueT = model.value(obs);
      const value = valueT.dataSync()[0];
      valueT.dispose();
      const action = options.sample
        ? sampleIndex(probs, (options.rng ?? Math.random)())
        : argmaxIndex(probs);
      if (action < 0 || action >= message.eligible.length) {
        violations += 1;
      }
      current.push({
        obs,
        action,
        logProb: Math.log(probs[action] + 1e-10),
        value,
        reward: 0,
        done: false,
      });
      reply(action);
    },
    (rewardTotal: number) => {
      if (current.length > 0) {
        const credited = initialWidth - lastWidth;
        current[current.length - 1].reward = rewardTotal - credited;
        current[current.length - 1].done = true;
      }
      episodes.push({ transitions: current, rewardTotal, initialWidth });
      current = [];
    },
  );

  return new Promise((resolve, reject) => {
    server.listen().then((port) => {
      const argv = [...coreCommand, "egs", taskPath, "--policy", "external",
                    "--policy-addr", `127.0.0.1:${port}`];
      const child = spawn(argv[0], argv.slice(1), { stdio: ["ignore", "pipe", "pipe"] });
      let stderr = "";
      child.stdout.resume(); // drain per-task progress lines
      child.stderr.on("data", (chunk) => { stderr += String(chunk); });
      const timer = setTimeout(() => {
        child.kill();
        server.close();
        reject(new Error("core subprocess timed out"));
      }, options.timeoutMs ?? 600_000);
      child.on("exit", (code) => {
        clearTimeout(timer);
        server.close();
        if (violations > 0) {
          reject(new Error(`${violations} masked-action violations`));
        } else if (code !== 0) {
          reject(new Error(`core exited with ${code}: ${stderr.slice(0, 500)}`));
        } else {
          resolve(episodes);
        }
      });
      child.on("error", (error) => {
        clearTimeout(timer);
        server.close();
        reject(error);
      });
    });
  });
}

export function disposeEpisodes(episodes: EpisodeResult[]): void {
  for (const episode of episodes) {
    for (const transition of episode.transitions) {
      transition.obs.features.dispose();
      transition.obs.closure.dispose();
    }
  }
}

export function meanReturn(episodes: EpisodeResult[]): number {
  if (episodes.length === 0) return 0;
  return episodes.reduce((a, e) => a + e.rewardTotal, 0) / episodes.length;
}

export { tf };
