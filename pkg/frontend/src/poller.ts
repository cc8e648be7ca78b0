/** Periodic view refresh with last-response-wins delivery.
 *
 * Responses are applied only when they belong to the most recently
 * issued request, so a slow poll can never overwrite a newer render
 * (no torn widget state).
 */

export class Poller<T> {
  private generation = 0;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly fetcher: () => Promise<T>,
    private readonly apply: (result: T) => void,
    private readonly onError: (error: unknown) => void = () => {},
    readonly intervalMs: number = 10_000,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.refreshNow(), this.intervalMs);
    void this.refreshNow();
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
    this.generation++; // in-flight responses become stale
  }

  async refreshNow(): Promise<void> {
    const issued = ++this.generation;
    try {
      const result = await this.fetcher();
      if (issued === this.generation) this.apply(result);
    } catch (error) {
      if (issued === this.generation) this.onError(error);
    }
  }
}
