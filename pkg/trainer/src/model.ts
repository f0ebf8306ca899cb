/**
 * Actor-critic network over DAG observations.
 *
 * Encoder: stacked pre-norm transformer layers whose attention scores
 * carry additive trainable scalars looked up from the closure matrix
 * and its transpose (two values per head per direction, shared across
 * layers). Actor: bilinear edge scores gathered at the eligible edges,
 * softmax over that list. Critic: per-node MLP, mean-pooled.
 */

import * as tf from "@tensorflow/tfjs";
import { EncodedObservation } from "./features.js";

export interface ModelConfig {
  featureDim: number;
  embedDim: number;
  mlpHidden: number;
  layers: number;
  heads: number;
  seed: number;
}

export const DEFAULT_MODEL: ModelConfig = {
  featureDim: 8,
  embedDim: 64,
  mlpHidden: 64,
  layers: 2,
  heads: 8,
  seed: 1,
};

interface LayerVars {
  ln1Gamma: tf.Variable; ln1Beta: tf.Variable;
  wq: tf.Variable; wk: tf.Variable; wv: tf.Variable; wo: tf.Variable;
  ln2Gamma: tf.Variable; ln2Beta: tf.Variable;
  mlpW1: tf.Variable; mlpB1: tf.Variable;
  mlpW2: tf.Variable; mlpB2: tf.Variable;
}

export class ActorCritic {
  readonly config: ModelConfig;
  embedW: tf.Variable;
  embedB: tf.Variable;
  layers: LayerVars[] = [];
  /** [heads, 2] additive attention scalars for closure / closure-transpose. */
  biasFwd: tf.Variable;
  biasBwd: tf.Variable;
  actorW1: tf.Variable;
  actorW2: tf.Variable;
  criticW1: tf.Variable;
  criticB1: tf.Variable;
  criticW2: tf.Variable;
  criticB2: tf.Variable;

  constructor(config: Partial<ModelConfig> = {}) {
    this.config = { ...DEFAULT_MODEL, ...config };
    const { featureDim, embedDim, mlpHidden, layers, heads, seed } = this.config;
    let next = seed;
    const init = (shape: number[], fanIn: number) =>
      tf.variable(tf.mul(tf.randomNormal(shape, 0, 1, "float32", next++),
                         Math.sqrt(1 / fanIn)));
    this.embedW = init([featureDim, embedDim], featureDim);
    this.embedB = tf.variable(tf.zeros([embedDim]));
    for (let l = 0; l < layers; l++) {
      this.layers.push({
        ln1Gamma: tf.variable(tf.ones([embedDim])),
        ln1Beta: tf.variable(tf.zeros([embedDim])),
        wq: init([embedDim, embedDim], embedDim),
        wk: init([embedDim, embedDim], embedDim),
        wv: init([embedDim, embedDim], embedDim),
        wo: init([embedDim, embedDim], embedDim),
        ln2Gamma: tf.variable(tf.ones([embedDim])),
        ln2Beta: tf.variable(tf.zeros([embedDim])),
        mlpW1: init([embedDim, mlpHidden], embedDim),
        mlpB1: tf.variable(tf.zeros([mlpHidden])),
        mlpW2: init([mlpHidden, embedDim], mlpHidden),
        mlpB2: tf.variable(tf.zeros([embedDim])),
      });
    }
    this.biasFwd = tf.variable(tf.zeros([heads, 2]));
    this.biasBwd = tf.variable(tf.zeros([heads, 2]));
    this.actorW1 = init([embedDim, embedDim], embedDim);
    this.actorW2 = init([embedDim, embedDim], embedDim);
    this.criticW1 = init([embedDim, mlpHidden], embedDim);
    this.criticB1 = tf.variable(tf.zeros([mlpHidden]));
    this.criticW2 = init([mlpHidden, 1], mlpHidden);
    this.criticB2 = tf.variable(tf.zeros([1]));
  }

  variables(): tf.Variable[] {
    const out = [this.embedW, this.embedB, this.biasFwd, this.biasBwd,
                 this.actorW1, this.actorW2,
                 this.criticW1, this.criticB1, this.criticW2, this.criticB2];
    for (const layer of this.layers) {
      out.push(layer.ln1Gamma, layer.ln1Beta, layer.wq, layer.wk, layer.wv,
               layer.wo, layer.ln2Gamma, layer.ln2Beta,
               layer.mlpW1, layer.mlpB1, layer.mlpW2, layer.mlpB2);
    }
    return out;
  }

  private layerNorm(x: tf.Tensor2D, gamma: tf.Variable, beta: tf.Variable): tf.Tensor2D {
    const mean = tf.mean(x, 1, true);
    const centered = tf.sub(x, mean);
    const variance = tf.mean(tf.square(centered), 1, true);
    const normed = tf.div(centered, tf.sqrt(tf.add(variance, 1e-5)));
    return tf.add(tf.mul(normed, gamma), beta) as tf.Tensor2D;
  }

  /** Node embeddings [n, d]; structural bias can be disabled for tests. */
  encode(obs: EncodedObservation, useBias = true): tf.Tensor2D {
    const { embedDim, heads } = this.config;
    const dk = embedDim / heads;
    const n = obs.n;
    return tf.tidy(() => {
      let h = tf.add(tf.matMul(obs.features, this.embedW), this.embedB) as tf.Tensor2D;
      const fwd = obs.closure;                       // [n, n] of 0/1
      const bwd = tf.transpose(fwd) as tf.Tensor2D;
      for (const layer of this.layers) {
        const x = this.layerNorm(h, layer.ln1Gamma, layer.ln1Beta);
        const toHeads = (w: tf.Variable) =>
          tf.transpose(tf.reshape(tf.matMul(x, w), [n, heads, dk]), [1, 0, 2]);
        const q = toHeads(layer.wq);                 // [heads, n, dk]
        const k = toHeads(layer.wk);
        const v = toHeads(layer.wv);
        let scores = tf.div(tf.matMul(q, k, false, true), Math.sqrt(dk));
        if (useBias) {
          // bias[h][i][j] = table[h][closure_ij]; closure is 0/1 so a
          // lerp between the two table entries implements the lookup.
          const biasOf = (table: tf.Variable, rel: tf.Tensor2D) => {
            const zero = tf.reshape(tf.slice(table, [0, 0], [heads, 1]), [heads, 1, 1]);
            const one = tf.reshape(tf.slice(table, [0, 1], [heads, 1]), [heads, 1, 1]);
            const relB = tf.expandDims(rel, 0);      // [1, n, n]
            return tf.add(tf.mul(one, relB), tf.mul(zero, tf.sub(1, relB)));
          };
          scores = tf.add(scores, biasOf(this.biasFwd, fwd));
          scores = tf.add(scores, biasOf(this.biasBwd, bwd));
        }
        const attn = tf.softmax(scores);             // [heads, n, n]
        const mixed = tf.matMul(attn, v);            // [heads, n, dk]
        const merged = tf.reshape(tf.transpose(mixed, [1, 0, 2]), [n, embedDim]);
        h = tf.add(h, tf.matMul(merged, layer.wo)) as tf.Tensor2D;
        const x2 = this.layerNorm(h, layer.ln2Gamma, layer.ln2Beta);
        const mlp = tf.matMul(
          tf.relu(tf.add(tf.matMul(x2, layer.mlpW1), layer.mlpB1)),
          layer.mlpW2,
        );
        h = tf.add(h, tf.add(mlp, layer.mlpB2)) as tf.Tensor2D;
      }
      return h;
    });
  }

  /** Probabilities over the observation's eligible edges (sum to 1). */
  actionProbs(obs: EncodedObservation, embeddings?: tf.Tensor2D): tf.Tensor1D {
    if (obs.eligible.length === 0) {
      throw new Error("empty eligible list");
    }
    return tf.tidy(() => {
      const h = embeddings ?? this.encode(obs);
      const left = tf.matMul(h, this.actorW1);
      const right = tf.matMul(h, this.actorW2);
      const scores = tf.matMul(left, right, false, true); // [n, n]
      const flat = tf.reshape(scores, [obs.n * obs.n]);
      const indices = obs.eligible.map(([i, j]) => i * obs.n + j);
      const logits = tf.gather(flat, tf.tensor1d(indices, "int32"));
      return tf.softmax(logits) as tf.Tensor1D;
    });
  }

  /** State value: per-node MLP downscaled to a scalar, mean over nodes. */
  value(obs: EncodedObservation, embeddings?: tf.Tensor2D): tf.Scalar {
    return tf.tidy(() => {
      const h = embeddings ?? this.encode(obs);
      const hidden = tf.relu(tf.add(tf.matMul(h, this.criticW1), this.criticB1));
      const scalars = tf.add(tf.matMul(hidden, this.criticW2), this.criticB2);
      return tf.mean(scalars) as tf.Scalar;
    });
  }
}

export interface CheckpointWeights {
  config: ModelConfig;
  weights: { shape: number[]; values: number[] }[];
}

export function exportWeights(model: ActorCritic): CheckpointWeights {
  return {
    config: model.config,
    weights: model.variables().map((variable) => ({
      shape: variable.shape.slice(),
      values: Array.from(variable.dataSync()),
    })),
  };
}

export function importWeights(payload: CheckpointWeights): ActorCritic {
  const model = new ActorCritic(payload.config);
  const variables = model.variables();
  if (variables.length !== payload.weights.length) {
    throw new Error("checkpoint does not match the model layout");
  }
  variables.forEach((variable, index) => {
    const saved = payload.weights[index];
    variable.assign(tf.tensor(saved.values, saved.shape as number[]));
  });
  return model;
}
