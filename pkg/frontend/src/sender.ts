/**
 * Ordered event uploader. Batches are assigned consecutive sequence numbers
 * at enqueue time and are only removed from the queue once the server
 * acknowledges them, so a retry after a dropped response re-sends the same
 * seq and the server's idempotency contract absorbs the duplicate. Batches
 * never overtake each other; the server rejects gaps.
 */

import type { ServiceClient } from "./client.js";
import { ServiceError } from "./client.js";
import type { EventBatch, WireEvent } from "./types.js";

export interface SenderOptions {
  /** Attempts per batch before flush() gives up and rethrows. */
  maxAttempts?: number;
  /** Base delay between attempts, doubled each retry. */
  retryDelayMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export class EventSender {
  private readonly queue: EventBatch[] = [];
  private nextSeq = 0;
  private flushing = false;
  private readonly maxAttempts: number;
  private readonly retryDelayMs: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(
    private readonly client: ServiceClient,
    private readonly sessionId: string,
    options: SenderOptions = {},
  ) {
    this.maxAttempts = options.maxAttempts ?? 5;
    this.retryDelayMs = options.retryDelayMs ?? 250;
    this.sleep = options.sleep ?? defaultSleep;
  }

  /** Queue events as the next batch; does not touch the network. */
  push(events: WireEvent[]): number {
    const seq = this.nextSeq++;
    this.queue.push({ seq, events });
    return seq;
  }

  get pending(): number {
    return this.queue.length;
  }

  /** Send every queued batch in order, retrying each with backoff. */
  async flush(): Promise<void> {
    if (this.flushing) throw new Error("flush already in progress");
    this.flushing = true;
    try {
      while (this.queue.length > 0) {
        const batch = this.queue[0]!;
        await this.sendWithRetry(batch);
        this.queue.shift();
      }
    } finally {
      this.flushing = false;
    }
  }

  private async sendWithRetry(batch: EventBatch): Promise<void> {
    let lastError: unknown;
    for (let attempt = 0; attempt < this.maxAttempts; attempt++) {
      if (attempt > 0) await this.sleep(this.retryDelayMs * 2 ** (attempt - 1));
      try {
        await this.client.appendEvents(this.sessionId, batch);
        return;
      } catch (error) {
        // A definitive server verdict (4xx) will not change on retry.
        if (error instanceof ServiceError && error.status < 500) throw error;
        lastError = error;
      }
    }
    throw lastError;
  }
}
