/**
 * Clipped-surrogate policy optimization with generalized advantage
 * estimation over variable-size graph observations.
 */

import * as tf from "@tensorflow/tfjs";
import { AgentConfig, learningRate } from "./config.js";
import { EncodedObservation } from "./features.js";
import { ActorCritic } from "./model.js";

export interface Transition {
  obs: EncodedObservation;
  action: number;
  logProb: number;
  value: number;
  reward: number;
  /** True on the final transition of an episode. */
  done: boolean;
}

export interface UpdateStats {
  /** Mean combined (policy + value) minibatch loss. */
  loss: number;
  gradientSteps: number;
}

/** GAE advantages and discounted returns; episodes end at `done`. */
export function computeAdvantages(
  transitions: Transition[],
  gamma: number,
  lambda: number,
): { advantages: number[]; returns: number[] } {
  const count = transitions.length;
  const advantages = new Array<number>(count).fill(0);
  let lastGae = 0;
  for (let t = count - 1; t >= 0; t--) {
    const tr = transitions[t];
    const nextValue = tr.done || t === count - 1 ? 0 : transitions[t + 1].value;
    const nextNonTerminal = tr.done ? 0 : 1;
    const delta = tr.reward + gamma * nextValue * nextNonTerminal - tr.value;
    lastGae = delta + gamma * lambda * nextNonTerminal * lastGae;
    advantages[t] = lastGae;
  }
  const returns = advantages.map((a, t) => a + transitions[t].value);
  return { advantages, returns };
}

export class PPOTrainer {
  private envSteps = 0;

  constructor(
    readonly model: ActorCritic,
    readonly config: AgentConfig,
  ) {}

  totalEnvSteps(): number {
    return this.envSteps;
  }

  /** One full update over a rollout; consumes (does not dispose) observations. */
  update(transitions: Transition[]): UpdateStats {
    if (transitions.length === 0) {
      return { loss: 0, gradientSteps: 0 };
    }
    this.envSteps += transitions.length;
    const { gamma, gaeLambda, clip, batchSize, epochsPerIteration,
            valueLossCoef } = this.config;
    const { advantages, returns } = computeAdvantages(transitions, gamma, gaeLambda);
    const mean = advantages.reduce((a, b) => a + b, 0) / advantages.length;
    const std = Math.sqrt(
      advantages.reduce((a, b) => a + (b - mean) ** 2, 0) / advantages.length) || 1;
    const normalized = advantages.map((a) => (a - mean) / (std + 1e-8));

    const optimizer = tf.train.adam(learningRate(this.config, this.envSteps));
    const variables = this.model.variables();
    let lossSum = 0;
    let steps = 0;
    const order = transitions.map((_, index) => index);
    for (let epoch = 0; epoch < epochsPerIteration; epoch++) {
      shuffleInPlace(order, epoch + 1);
      for (let start = 0; start < order.length; start += batchSize) {
        const batch = order.slice(start, start + batchSize);
        const losses = optimizer.minimize(() => {
          const perSample: tf.Scalar[] = [];
          for (const index of batch) {
            const tr = transitions[index];
            const h = this.model.encode(tr.obs);
            const probs = this.model.actionProbs(tr.obs, h);
            const logProb = tf.log(tf.add(
              tf.gather(probs, tf.tensor1d([tr.action], "int32")), 1e-10));
            const ratio = tf.exp(tf.sub(logProb, tr.logProb));
            const adv = normalized[index];
            const surr1 = tf.mul(ratio, adv);
            const surr2 = tf.mul(tf.clipByValue(ratio, 1 - clip, 1 + clip), adv);
            const policyLoss = tf.neg(tf.minimum(surr1, surr2));
            const value = this.model.value(tr.obs, h);
            const valueLoss = tf.square(tf.sub(value, returns[index]));
            perSample.push(tf.add(
              tf.sum(policyLoss),
              tf.mul(valueLossCoef, valueLoss)) as tf.Scalar);
            h.dispose();
          }
          return tf.div(tf.addN(perSample), perSample.length) as tf.Scalar;
        }, true, variables);
        if (losses !== null) {
          lossSum += losses.dataSync()[0];
          losses.dispose();
        }
        steps += 1;
      }
    }
    optimizer.dispose();
    return { loss: steps ? lossSum / steps : 0, gradientSteps: steps };
  }
}

function shuffleInPlace(values: number[], seed: number): void {
  // xorshift32; deterministic shuffles keep training reproducible.
  let state = (seed * 2654435761) >>> 0 || 1;
  const next = () => {
    state ^= state << 13; state >>>= 0;
    state ^= state >> 17;
    state ^= state << 5; state >>>= 0;
    return state / 0xffffffff;
  };
  for (let i = values.length - 1; i > 0; i--) {
    const j = Math.floor(next() * (i + 1));
    [values[i], values[j]] = [values[j], values[i]];
  }
}
