// Shared console chrome: status badge, countdown wiring, connection banner.

import { Countdown, formatRemaining } from '../countdown';
import { el } from '../format';
import type { View } from '../types';

export class ConsoleShell {
  readonly root: HTMLElement;
  readonly header: HTMLElement;
  readonly status: HTMLElement;
  readonly clock: HTMLElement;
  readonly banner: HTMLElement;
  readonly body: HTMLElement;
  readonly countdown = new Countdown();
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(title: string) {
    this.root = el('div', 'console');
    this.header = el('header', 'console-header');
    this.header.append(el('h1', 'console-title', title));
    this.status = el('span', 'status-badge', 'connecting');
    this.clock = el('span', 'countdown', '--:--');
    this.banner = el('div', 'connection-banner hidden', 'connection lost, reconnecting…');
    this.header.append(this.status, this.clock);
    this.body = el('main', 'console-body');
    this.root.append(this.banner, this.header, this.body);
  }

  /** Keep the countdown ticking between pushed views. */
  startClock(): void {
    if (this.timer) return;
    this.timer = setInterval(() => this.renderClock(), 250);
  }

  stopClock(): void {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
  }

  absorb(view: View): void {
    if (view.server_now !== undefined) this.countdown.noteServerTime(view.server_now);
    this.countdown.setClose(view.status === 'open' || view.status === 'extended' ? view.now_close : null);
    this.status.textContent = view.status;
    this.status.dataset.status = view.status;
    this.renderClock();
  }

  renderClock(): void {
    this.clock.textContent = formatRemaining(this.countdown.remainingMs());
  }

  setConnected(connected: boolean): void {
    this.banner.classList.toggle('hidden', connected);
  }
}

export function eventFeed(events: View['events'], describe: (ev: View['events'][number]) => string | null): HTMLElement {
  const feed = el('ul', 'event-feed');
  for (const ev of events.slice(-12).reverse()) {
    const text = describe(ev);
    if (text === null) continue;
    const item = el('li', `event event-${ev.kind}`, text);
    feed.append(item);
  }
  return feed;
}
