/**
 * JSON-lines policy protocol shared with the scheduler core.
 *
 * The core sends one `observe` message per decision step and expects an
 * `act` reply carrying an index into the observation's eligible-edge
 * list; at termination it sends `episode_end` with the total reward.
 */

import * as net from "node:net";
import * as readline from "node:readline";

export interface ObserveMessage {
  type: "observe";
  step: number;
  n: number;
  /** Per node: [wcet, est, eft, lst, lft, lw, iw, ow]. */
  features: number[][];
  /** Colon-joined fixed-width hex rows; bit j of row i = closure (i, j). */
  tc: string;
  eligible: [number, number][];
  width: number;
  lower_bound: number;
}

export interface ActMessage {
  type: "act";
  index: number;
}

export interface EpisodeEndMessage {
  type: "episode_end";
  reward_total: number;
}

export type CoreMessage = ObserveMessage | EpisodeEndMessage;

export function parseCoreMessage(line: string): CoreMessage {
  const message = JSON.parse(line) as CoreMessage;
  if (message.type !== "observe" && message.type !== "episode_end") {
    throw new Error(`unexpected message type: ${line}`);
  }
  if (message.type === "observe") {
    if (!Array.isArray(message.features) || message.features.length !== message.n) {
      throw new Error(`observation features do not match n: ${line}`);
    }
    if (!Array.isArray(message.eligible)) {
      throw new Error(`observation lacks an eligible list: ${line}`);
    }
  }
  return message;
}

export function encodeAct(index: number): string {
  const message: ActMessage = { type: "act", index };
  return JSON.stringify(message);
}

/** Decode the closure hex rows into boolean bit getters. */
export function decodeClosure(tc: string, n: number): (i: number, j: number) => boolean {
  const rows = tc.split(":").map((part) => BigInt("0x" + part));
  return (i, j) => ((rows[i] >> BigInt(j)) & 1n) === 1n;
}

export type EpisodeHandler = (
  message: ObserveMessage,
  reply: (index: number) => void,
) => void;

export type EpisodeDone = (rewardTotal: number) => void;

/**
 * One accepted connection = one episode. `onObserve` must call `reply`
 * exactly once per observation; `onEnd` fires with the episode reward.
 */
export class PolicyServer {
  private server: net.Server;

  constructor(
    private onObserve: EpisodeHandler,
    private onEnd: EpisodeDone,
  ) {
    this.server = net.createServer((socket) => this.handle(socket));
  }

  private handle(socket: net.Socket): void {
    const lines = readline.createInterface({ input: socket });
    lines.on("line", (line) => {
      const message = parseCoreMessage(line);
      if (message.type === "observe") {
        this.onObserve(message, (index) => socket.write(encodeAct(index) + "\n"));
      } else {
        this.onEnd(message.reward_total);
        lines.close();
        socket.end();
      }
    });
  }

  listen(): Promise<number> {
    return new Promise((resolve) => {
      this.server.listen(0, "127.0.0.1", () => {
        const address = this.server.address() as net.AddressInfo;
        resolve(address.port);
      });
    });
  }

  close(): void {
    this.server.close();
  }
}

/**
 * Serve a policy over stdio as a child process of the core: read
 * observe lines from stdin, write act lines to stdout. Handles any
 * number of consecutive episodes until stdin closes.
 */
export function serveStdio(onObserve: (message: ObserveMessage) => number): Promise<void> {
  return new Promise((resolve) => {
    const lines = readline.createInterface({ input: process.stdin });
    lines.on("line", (line) => {
      const message = parseCoreMessage(line);
      if (message.type === "observe") {
        process.stdout.write(encodeAct(onObserve(message)) + "\n");
      }
    });
    lines.on("close", () => resolve());
  });
}
