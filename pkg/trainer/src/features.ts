/**
 * Observation tensors: normalized node features plus closure masks.
 *
 * Timing columns are scaled by the deadline (the maximum latest-finish
 * time) and width columns by the node count, so checkpoints transfer
 * across task scales.
 */

import * as tf from "@tensorflow/tfjs";
import { ObserveMessage } from "./protocol.js";

export interface EncodedObservation {
  /** [n, 8] normalized features. */
  features: tf.Tensor2D;
  /** [n, n] 0/1 forward closure. */
  closure: tf.Tensor2D;
  /** Eligible edges in observation order. */
  eligible: [number, number][];
  n: number;
  width: number;
  lowerBound: number;
}

export function closureMatrix(message: ObserveMessage): number[][] {
  const rows = message.tc.split(":").map((part) => BigInt("0x" + part));
  const out: number[][] = [];
  for (let i = 0; i < message.n; i++) {
    const row: number[] = [];
    for (let j = 0; j < message.n; j++) {
      row.push(Number((rows[i] >> BigInt(j)) & 1n));
    }
    out.push(row);
  }
  return out;
}

export function normalizeFeatures(message: ObserveMessage): number[][] {
  // Columns: wcet, est, eft, lst, lft, lw, iw, ow.
  let deadline = 1;
  for (const row of message.features) {
    if (row[4] > deadline) deadline = row[4];
  }
  const n = Math.max(1, message.n);
  return message.features.map((row) => [
    row[0] / deadline,
    row[1] / deadline,
    row[2] / deadline,
    row[3] / deadline,
    row[4] / deadline,
    row[5] / n,
    row[6] / n,
    row[7] / n,
  ]);
}

export function encodeObservation(message: ObserveMessage): EncodedObservation {
  return {
    features: tf.tensor2d(normalizeFeatures(message)),
    closure: tf.tensor2d(closureMatrix(message)),
    eligible: message.eligible,
    n: message.n,
    width: message.width,
    lowerBound: message.lower_bound,
  };
}

export function disposeObservation(obs: EncodedObservation): void {
  obs.features.dispose();
  obs.closure.dispose();
}
