/** Fixture-backed fetch: replays responses recorded from the real server.
 * Requests match on method + path + canonicalized params/body, so JSON
 * whitespace and key order differences between recorder and client never
 * matter. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

export interface Exchange {
  request: {
    method: string;
    path: string;
    params?: Record<string, string>;
    body?: unknown;
  };
  response: unknown;
}

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture(name: string): Exchange[] {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, `${name}.json`), "utf-8"));
}

/** Deterministic stringify with object keys sorted at every level. */
export function canonical(value: unknown): string {
  if (value === null || typeof value !== "object") return JSON.stringify(value);
  if (Array.isArray(value)) return `[${value.map(canonical).join(",")}]`;
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`);
  return `{${entries.join(",")}}`;
}

function canonicalParam(value: string): string {
  try {
    return canonical(JSON.parse(value));
  } catch {
    return value;
  }
}

function sameParams(a: Record<string, string>, b: Record<string, string>): boolean {
  const keysA = Object.keys(a).sort();
  const keysB = Object.keys(b).sort();
  if (keysA.join() !== keysB.join()) return false;
  return keysA.every((k) => canonicalParam(a[k]) === canonicalParam(b[k]));
}

export function fixtureFetch(exchanges: Exchange[]): FetchLike {
  return async (url, init) => {
    const method = (init?.method ?? "GET").toUpperCase();
    const parsed = new URL(url, "http://fixture");
    const params: Record<string, string> = {};
    parsed.searchParams.forEach((value, key) => {
      params[key] = value;
    });
    for (const exchange of exchanges) {
      if (exchange.request.method !== method || exchange.request.path !== parsed.pathname) {
        continue;
      }
      if (method === "GET") {
        if (sameParams(exchange.request.params ?? {}, params)) {
          return jsonResponse(exchange.response);
        }
      } else {
        const body = init?.body ? JSON.parse(String(init.body)) : null;
        if (canonical(body) === canonical(exchange.request.body ?? null)) {
          return jsonResponse(exchange.response);
        }
      }
    }
    throw new Error(`no recorded fixture for ${method} ${url}`);
  };
}

function jsonResponse(data: unknown): Response {
  return new Response(JSON.stringify(data), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

export function findGet(
  exchanges: Exchange[],
  path: string,
  match: (params: Record<string, string>) => boolean = () => true,
): Exchange {
  const hit = exchanges.find(
    (e) => e.request.method === "GET" && e.request.path === path && match(e.request.params ?? {}),
  );
  if (!hit) throw new Error(`no ${path} exchange in fixture`);
  return hit;
}
