// Auctioneer console: the only screen that correlates bids to bidders.
// Full bid table with real identities, open/cancel controls, phase and
// round progress, extension counter.

import type { ApiClient } from '../api';
import { ApiError } from '../api';
import { el, formatAmount } from '../format';
import type { View } from '../types';
import { ConsoleShell, eventFeed } from './common';

export class AuctioneerConsole {
  readonly shell = new ConsoleShell('auctioneer console');

  constructor(private api: ApiClient) {}

  get root(): HTMLElement {
    return this.shell.root;
  }

  update(view: View): void {
    this.shell.absorb(view);
    const body = this.shell.body;
    body.textContent = '';

    const controls = el('div', 'controls');
    const note = el('span', 'form-note');
    if (view.status === 'scheduled') {
      const openBtn = el('button', 'open-button', 'open auction');
      openBtn.addEventListener('click', () => {
        void this.api
          .open(view.auction_id)
          .catch((err: unknown) => (note.textContent = err instanceof ApiError ? err.code : String(err)));
      });
      controls.append(openBtn);
    }
    if (view.status === 'scheduled' || view.status === 'open' || view.status === 'extended') {
      const cancelBtn = el('button', 'cancel-button', 'cancel auction');
      cancelBtn.addEventListener('click', () => {
        if (!window.confirm('Cancel this auction? This cannot be undone.')) return;
        void this.api
          .cancel(view.auction_id)
          .catch((err: unknown) => (note.textContent = err instanceof ApiError ? err.code : String(err)));
      });
      controls.append(cancelBtn);
    }
    controls.append(note);
    body.append(controls);

    const stats = el('div', 'stat-row');
    stats.append(
      stat('extensions', String(view.extension_count)),
      stat('bidders online', String(view.competitor_count_online)),
      stat('admitted', String(view.competitor_count_total)),
    );
    if (view.current_phase !== undefined) stats.append(stat('phase', `${view.current_phase}/${view.phases}`));
    if (view.current_round !== undefined) stats.append(stat('round', `${view.current_round}/${view.rounds}`));
    if (view.target_hit !== null && view.target_hit !== undefined) {
      stats.append(stat('target hit', view.target_hit ? 'yes' : 'no'));
    }
    body.append(stats);

    for (const slot of view.slots) {
      const card = el('section', 'slot-card');
      card.append(el('h2', 'slot-title', `${slot.description ?? slot.slot_id}`));
      const table = el('table', 'bid-table');
      const head = el('tr');
      for (const column of ['bidder', 'amount', 'at']) head.append(el('th', undefined, column));
      table.append(head);
      for (const bid of (slot.bids ?? []).slice().reverse()) {
        const row = el('tr', 'bid-row');
        row.append(
          el('td', 'bidder-id', String(bid['bidder_id'])),
          el('td', 'amount', formatAmount(bid['amount'] as number, view.currency)),
          el('td', 'at', String(bid['submitted_at'])),
        );
        table.append(row);
      }
      card.append(table);
      if (slot.ranking && slot.ranking.length > 0) {
        const ranking = el('ol', 'ranking');
        for (const entry of slot.ranking) {
          ranking.append(el('li', 'ranking-entry', `${entry.bidder_id}: ${formatAmount(entry.amount, view.currency)}`));
        }
        card.append(ranking);
      }
      body.append(card);
    }

    body.append(
      eventFeed(view.events, (ev) => {
        const payload = ev['payload'] as Record<string, unknown> | undefined;
        switch (ev.kind) {
          case 'bid_accepted':
            return `${payload?.['bidder_id']} bid ${formatAmount(payload?.['amount'] as number, view.currency)}`;
          case 'bid_rejected':
            return `${payload?.['bidder_id']} rejected: ${payload?.['reason']}`;
          case 'extended':
            return `extended to ${payload?.['new_close']}`;
          case 'phase_advanced':
            return `phase ${payload?.['phase_closed']} closed, admitted: ${(payload?.['admitted'] as string[]).join(', ') || 'nobody'}`;
          case 'round_closed':
            return `round ${payload?.['round']} closed, dropped: ${(payload?.['dropped'] as string[]).join(', ') || 'nobody'}`;
          case 'closed':
            return 'auction closed';
          case 'cancelled':
            return 'auction cancelled';
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
