// Guest console: fully redacted observation mode. Renders only what the
// guest view carries (status, countdown, counts, percentages); it never
// computes, caches, or infers anything the server masked.

import { el, formatPercent } from '../format';
import type { View } from '../types';
import { ConsoleShell, eventFeed } from './common';

export class GuestConsole {
  readonly shell = new ConsoleShell('auction observer');
  private trajectory: { seq: number; percent: number }[] = [];

  get root(): HTMLElement {
    return this.shell.root;
  }

  update(view: View): void {
    this.shell.absorb(view);
    const body = this.shell.body;
    body.textContent = '';

    for (const ev of view.events) {
      const percent = ev['percent'];
      if (typeof percent === 'number' && !this.trajectory.some((p) => p.seq === ev.seq)) {
        this.trajectory.push({ seq: ev.seq, percent });
      }
    }
    this.trajectory.sort((a, b) => a.seq - b.seq);

    const stats = el('div', 'stat-row');
    stats.append(
      stat('bids', String(view.bid_count ?? 0)),
      stat('bidders online', String(view.competitor_count_online)),
    );
    body.append(stats);

    for (const slot of view.slots) {
      const card = el('section', 'slot-card guest-slot');
      card.append(el('h2', 'slot-title', `lot ${slot.slot}`));
      card.append(el('div', 'leading-percent', formatPercent(slot.leading_percent)));
      card.append(el('div', 'slot-meta', `${slot.bid_count} bids`));
      body.append(card);
    }
    if (view.dutch) {
      body.append(el('div', 'dutch-percent', `price at ${formatPercent(view.dutch.price_percent)}`));
    }

    const chart = el('div', 'trajectory');
    chart.append(el('h2', 'chart-title', 'price trajectory'));
    const track = el('div', 'trajectory-track');
    for (const point of this.trajectory.slice(-40)) {
      const bar = el('span', 'trajectory-bar');
      bar.style.height = `${Math.min(100, Math.max(2, point.percent))}%`;
      bar.title = formatPercent(point.percent);
      track.append(bar);
    }
    chart.append(track);
    body.append(chart);

    if (view.status === 'closed') {
      const last = this.trajectory[this.trajectory.length - 1];
      body.append(el('div', 'closed-badge', `closed at ${formatPercent(last?.percent ?? null)}`));
    }

    body.append(
      eventFeed(view.events, (ev) => {
        switch (ev.kind) {
          case 'bid_accepted':
            return `bid at ${formatPercent(ev.percent as number)}`;
          case 'extended':
            return 'extended';
          case 'round_closed':
            return `round closed (${ev.bid_count} bids)`;
          case 'phase_advanced':
            return `phase advanced (${ev.admitted_count} admitted)`;
          case 'dutch_tick':
            return `price at ${formatPercent(ev.percent as number)}`;
          case 'closed':
            return 'closed';
          case 'cancelled':
            return 'cancelled';
          default:
            return null;
        }
      }),
    );
  }
}

function stat(label: string, value: string): HTMLElement {
  const box = el('span', 'stat');
  box.append(el('span', 'stat-label', label), el('span', 'stat-value', value));
  return box;
}
