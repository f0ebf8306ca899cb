/**
 * End-to-end protocol conformance against the real scheduler core.
 * Requires the `egsched` CLI on PATH (pip install -e of the repository).
 */

import { spawn } from "node:child_process";
import { once } from "node:events";
import { describe, expect, it } from "vitest";
import { ObserveMessage, PolicyServer } from "../src/protocol.js";

const fixture = (name: string) =>
  new URL(`./fixtures/${name}`, import.meta.url).pathname;

function runCore(args: string[]): Promise<{ code: number; stdout: string }> {
  return new Promise((resolve, reject) => {
    const child = spawn("egsched", args, { stdio: ["ignore", "pipe", "pipe"] });
    let stdout = "";
    let stderr = "";
    child.stdout.on("data", (chunk) => { stdout += String(chunk); });
    child.stderr.on("data", (chunk) => { stderr += String(chunk); });
    child.on("error", reject);
    child.on("exit", (code) =>
      resolve({ code: code ?? -1, stdout: stdout + stderr }));
  });
}

describe("scripted fake trainer driving the core", () => {
  it("steers the 9-node task to two processors via the scripted pair", async () => {
    const script: [number, number][] = [[1, 2], [6, 5]];
    const seen: ObserveMessage[] = [];
    let episodeReward = -1;
    const server = new PolicyServer(
      (message, reply) => {
        seen.push(message);
        const wanted = script.shift();
        if (!wanted) throw new Error("script exhausted");
        const index = message.eligible.findIndex(
          ([i, j]) => i === wanted[0] && j === wanted[1]);
        expect(index).toBeGreaterThanOrEqual(0);
        reply(index);
      },
      (rewardTotal) => { episodeReward = rewardTotal; },
    );
    const port = await server.listen();
    const result = await runCore([
      "egs", fixture("nine_node.json"), "--policy", "external",
      "--policy-addr", `127.0.0.1:${port}`]);
    server.close();
    expect(result.code).toBe(0);
    expect(result.stdout).toContain("processors 2");
    expect(episodeReward).toBe(1);
    expect(seen).toHaveLength(2);
    expect(seen[0].width).toBe(3);
    expect(seen[0].eligible).toHaveLength(12);
    expect(seen[1].width).toBe(3);
  }, 30_000);

  it("matches the golden first observation for the 7-node task", async () => {
    const { readFileSync } = await import("node:fs");
    const goldenLine = readFileSync(
      new URL("../golden/seven_node_observe.jsonl", import.meta.url), "utf-8").trim();
    let captured = "";
    const server = new PolicyServer(
      (message, reply) => {
        if (!captured) captured = JSON.stringify(message);
        reply(0);
      },
      () => undefined,
    );
    const port = await server.listen();
    const result = await runCore([
      "egs", fixture("seven_node.json"), "--policy", "external",
      "--policy-addr", `127.0.0.1:${port}`]);
    server.close();
    expect(result.code).toBe(0);
    expect(JSON.parse(captured)).toEqual(JSON.parse(goldenLine));
  }, 30_000);

  it("a policy that dies mid-episode makes the core exit with code 4", async () => {
    const net = await import("node:net");
    // Accept, then hang up without ever answering.
    const server = net.createServer((socket) => {
      socket.once("data", () => socket.destroy());
    });
    await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
    const port = (server.address() as import("node:net").AddressInfo).port;
    const result = await runCore([
      "egs", fixture("seven_node.json"), "--policy", "external",
      "--policy-addr", `127.0.0.1:${port}`]);
    server.close();
    expect(result.code).toBe(4);
  }, 30_000);
});
