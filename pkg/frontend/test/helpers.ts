import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const here = dirname(fileURLToPath(import.meta.url));
// dist-test/test/ -> repo fixtures directory
const FIXTURE_PATH = join(here, "..", "..", "..", "fixtures", "golden", "figure2_api.json");

export type ApiBodies = Record<string, unknown>;

export function loadApiBodies(): ApiBodies {
  return JSON.parse(readFileSync(FIXTURE_PATH, "utf-8")) as ApiBodies;
}

export interface StubController {
  fetch: FetchLike;
  calls: string[];
  inFlight(): number;
  maxInFlight(): number;
  releaseAll(): void;
  setHold(hold: boolean): void;
}

// Fetch stub serving the committed API bodies captured from the real server.
// With hold=true, responses wait until releaseAll() so tests can observe
// in-flight behavior deterministically.
export function makeStubFetch(bodies: ApiBodies): StubController {
  const calls: string[] = [];
  let holding = false;
  let inFlight = 0;
  let peak = 0;
  let releasers: Array<() => void> = [];

  const fetch: FetchLike = (url: string) => {
    calls.push(url);
    const key = `GET ${url}`;
    inFlight += 1;
    peak = Math.max(peak, inFlight);
    const finish = (): { ok: boolean; status: number; json(): Promise<unknown> } => {
      inFlight -= 1;
      if (!(key in bodies)) {
        return {
          ok: false,
          status: 404,
          json: async () => ({ status: 404, code: "not_found", detail: `no fixture for ${url}` }),
        };
      }
      const body = bodies[key];
      return { ok: true, status: 200, json: async () => JSON.parse(JSON.stringify(body)) };
    };
    if (!holding) {
      return Promise.resolve(finish());
    }
    return new Promise((resolve) => {
      releasers.push(() => resolve(finish()));
    });
  };

  return {
    fetch,
    calls,
    inFlight: () => inFlight,
    maxInFlight: () => peak,
    releaseAll: () => {
      const pending = releasers;
      releasers = [];
      for (const release of pending) release();
    },
    setHold: (hold: boolean) => {
      holding = hold;
    },
  };
}

export function failingFetch(): FetchLike {
  return () => Promise.reject(new Error("connection refused"));
}

// Lets promise chains scheduled by resolved promises run to completion.
export async function settle(): Promise<void> {
  for (let i = 0; i < 20; i++) {
    await Promise.resolve();
  }
}
