import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Poller } from "../src/poller";

beforeEach(() => vi.useFakeTimers());
afterEach(() => vi.useRealTimers());

function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

describe("Poller", () => {
  it("applies only the latest response when polls overlap", async () => {
    const pending: ReturnType<typeof deferred<string>>[] = [];
    const applied: string[] = [];
    const poller = new Poller<string>(
      () => {
        const d = deferred<string>();
        pending.push(d);
        return d.promise;
      },
      (value) => applied.push(value),
    );

    void poller.refreshNow(); // request 1 (slow)
    void poller.refreshNow(); // request 2 (fast)
    pending[1]!.resolve("second");
    await vi.waitFor(() => expect(applied).toEqual(["second"]));
    pending[0]!.resolve("first"); // stale response arrives late
    await vi.advanceTimersByTimeAsync(0);
    expect(applied).toEqual(["second"]); // never overwritten
  });

  it("polls on the configured interval", async () => {
    let calls = 0;
    const poller = new Poller<number>(
      async () => ++calls,
      () => {},
      () => {},
      10_000,
    );
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(calls).toBe(1); // immediate first fetch
    await vi.advanceTimersByTimeAsync(10_000);
    expect(calls).toBe(2);
    await vi.advanceTimersByTimeAsync(20_000);
    expect(calls).toBe(4);
    poller.stop();
    await vi.advanceTimersByTimeAsync(30_000);
    expect(calls).toBe(4);
  });

  it("reports errors only for the latest request", async () => {
    const errors: unknown[] = [];
    const pending: ReturnType<typeof deferred<string>>[] = [];
    const poller = new Poller<string>(
      () => {
        const d = deferred<string>();
        pending.push(d);
        return d.promise;
      },
      () => {},
      (error) => errors.push(error),
    );
    void poller.refreshNow();
    void poller.refreshNow();
    pending[0]!.reject(new Error("stale failure"));
    await vi.advanceTimersByTimeAsync(0);
    expect(errors).toEqual([]);
    pending[1]!.reject(new Error("current failure"));
    await vi.waitFor(() => expect(errors.length).toBe(1));
  });
});
