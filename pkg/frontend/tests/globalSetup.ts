/**
 * Spawns the Python freqloss service for the test run and tears it down.
 * Requires the freqloss package to be installed (pip install -e ..).
 */

import { ChildProcess, spawn } from "node:child_process";

export const BASE_URL = "http://127.0.0.1:8977";

let server: ChildProcess | undefined;

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = undefined;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE_URL}/v1/health`);
      if (resp.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`freqloss service did not come up: ${lastError}`);
}

export default async function setup(): Promise<() => Promise<void>> {
  server = spawn(
    "python3",
    [
      "-m",
      "uvicorn",
      "freqloss.service.app:app",
      "--host",
      "127.0.0.1",
      "--port",
      "8977",
      "--log-level",
      "warning",
    ],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  server.on("error", (err) => {
    console.error(`failed to start service: ${err}`);
  });
  await waitForHealth();
  return async () => {
    if (server && !server.killed) {
      server.kill("SIGTERM");
      await new Promise((resolve) => setTimeout(resolve, 300));
      if (server.exitCode === null) server.kill("SIGKILL");
    }
  };
}
