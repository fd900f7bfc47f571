/** Test harness: spawns a real gateway process on an ephemeral port and
 * provides DOM polling utilities. */

import { spawn, execFileSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface Gateway {
  baseUrl: string;
  storeDir: string;
  process: ChildProcess;
  stop(): void;
}

export function dataPath(name: string): string {
  return execFileSync(
    "python3",
    ["-c", `from landscape.fixtures import data_path; print(data_path(${JSON.stringify(name)}))`],
    { encoding: "utf-8" },
  ).trim();
}

export async function spawnGateway(): Promise<Gateway> {
  const storeDir = mkdtempSync(join(tmpdir(), "landscape-store-"));
  const child = spawn(
    "python3",
    ["-m", "landscape.cli", "serve", "--store", storeDir, "--host", "127.0.0.1", "--port", "0", "--cors", "http://localhost:3000"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );

  const port = await new Promise<number>((resolve, reject) => {
    let buffer = "";
    const onData = (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/running on http:\/\/127\.0\.0\.1:(\d+)/i);
      if (match) {
        resolve(Number(match[1]));
      }
    };
    child.stdout!.on("data", onData);
    child.stderr!.on("data", onData);
    child.on("exit", (code) => reject(new Error(`gateway exited early (${code}): ${buffer}`)));
    setTimeout(() => reject(new Error(`gateway did not start: ${buffer}`)), 60000);
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  for (let i = 0; i < 100; i++) {
    try {
      const response = await fetch(`${baseUrl}/health`);
      if (response.ok) break;
    } catch {
      await sleep(100);
    }
  }
  return {
    baseUrl,
    storeDir,
    process: child,
    stop: () => {
      child.kill("SIGTERM");
    },
  };
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function until(
  condition: () => boolean,
  timeoutMs = 30000,
  label = "condition",
): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error(`timed out waiting for ${label}`);
    }
    await sleep(50);
  }
}

export function setInput(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}
