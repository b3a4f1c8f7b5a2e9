// Server-push view stream over SSE with automatic resubscribe.
//
// EventSource cannot send an Authorization header, so the stream is read
// with fetch + ReadableStream. Views are snapshots: a reconnect starts
// from the current state, no gap handling needed. Stale frames (lower
// as_of_seq than already rendered) are dropped.

import type { View } from './types';

export interface StreamHandlers {
  onView: (view: View) => void;
  onStatus?: (connected: boolean) => void;
}

export class ViewStream {
  private stopped = false;
  private lastSeq = -1;
  private retryMs = 500;

  constructor(
    private url: string,
    private token: string,
    private handlers: StreamHandlers,
  ) {}

  start(): void {
    void this.loop();
  }

  stop(): void {
    this.stopped = true;
  }

  private async loop(): Promise<void> {
    while (!this.stopped) {
      try {
        const resp = await fetch(this.url, {
          headers: { Authorization: `Bearer ${this.token}`, Accept: 'text/event-stream' },
        });
        if (!resp.ok || !resp.body) throw new Error(`stream HTTP ${resp.status}`);
        this.handlers.onStatus?.(true);
        this.retryMs = 500;
        await this.consume(resp.body);
      } catch {
        // fall through to retry
      }
      if (this.stopped) return;
      this.handlers.onStatus?.(false);
      await sleep(this.retryMs);
      this.retryMs = Math.min(this.retryMs * 2, 10_000);
    }
  }

  private async consume(body: ReadableStream<Uint8Array>): Promise<void> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let buffer = '';
    for (;;) {
      const { done, value } = await reader.read();
      if (done || this.stopped) return;
      buffer += decoder.decode(value, { stream: true });
      let boundary = buffer.indexOf('\n\n');
      while (boundary >= 0) {
        const frame = buffer.slice(0, boundary);
        buffer = buffer.slice(boundary + 2);
        this.handleFrame(frame);
        boundary = buffer.indexOf('\n\n');
      }
    }
  }

  private handleFrame(frame: string): void {
    for (const line of frame.split('\n')) {
      if (!line.startsWith('data: ')) continue; // keep-alives start with ':'
      const view = JSON.parse(line.slice(6)) as View;
      if (view.as_of_seq >= this.lastSeq) {
        this.lastSeq = view.as_of_seq;
        this.handlers.onView(view);
      }
    }
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
