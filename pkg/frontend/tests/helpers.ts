import assert from "node:assert/strict";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname } from "node:path";

// compiled tests live in public/dist/tests/, sources in tests/
const fixtureUrl = (name: string) =>
  new URL(`../../../fixtures/${name}`, import.meta.url);
const snapshotUrl = (name: string) =>
  new URL(`../../../tests/snapshots/${name}`, import.meta.url);

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(fixtureUrl(name), "utf-8")) as T;
}

/** Compare against a committed snapshot; UPDATE_SNAPSHOTS=1 rewrites them. */
export function checkSnapshot(name: string, actual: string): void {
  const url = snapshotUrl(name);
  if (process.env.UPDATE_SNAPSHOTS) {
    mkdirSync(dirname(fileURLToPath(url)), { recursive: true });
    writeFileSync(url, actual);
    return;
  }
  const expected = readFileSync(url, "utf-8");
  assert.equal(actual, expected, `snapshot ${name} drifted (UPDATE_SNAPSHOTS=1 to accept)`);
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** fetch stand-in that serves canned documents and records every call. */
export function fakeFetch(
  route: (url: string, body: unknown) => { status: number; doc: unknown },
  calls: RecordedCall[] = [],
) {
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url, method: init?.method ?? "GET", body });
    const { status, doc } = route(url, body);
    return {
      status,
      json: async () => doc,
    } as unknown as Response;
  };
  return { impl, calls };
}

export function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}
