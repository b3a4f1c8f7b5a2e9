// Originator console: live amounts and rankings with pseudonymous
// bidders; identities appear only after the close, via the server.

import { el, formatAmount } from '../format';
import type { View } from '../types';
import { ConsoleShell, eventFeed } from './common';

export class OriginatorConsole {
  readonly shell = new ConsoleShell('originator console');

  get root(): HTMLElement {
    return this.shell.root;
  }

  update(view: View): void {
    this.shell.absorb(view);
    const body = this.shell.body;
    body.textContent = '';

    const stats = el('div', 'stat-row');
    stats.append(
      stat('bidders online', String(view.competitor_count_online)),
      stat('admitted', String(view.competitor_count_total)),
      stat('extensions', String(view.extension_count)),
    );
    if (view.target_value != null) {
      stats.append(stat('target', formatAmount(view.target_value, view.currency)));
      stats.append(stat('target hit', view.target_hit ? 'yes' : 'no'));
    }
    body.append(stats);

    for (const slot of view.slots) {
      const card = el('section', 'slot-card');
      card.append(el('h2', 'slot-title', `${slot.description ?? slot.slot_id}`));
      if (slot.leading) {
        card.append(
          el('div', 'leading', `leading: ${formatAmount(slot.leading.amount, view.currency)} (${slot.leading.label})`),
        );
      } else {
        card.append(el('div', 'leading', 'no bids yet'));
      }
      if (slot.ranking && slot.ranking.length > 0) {
        const ranking = el('ol', 'ranking');
        for (const entry of slot.ranking) {
          ranking.append(el('li', 'ranking-entry', `${entry.label}: ${formatAmount(entry.amount, view.currency)}`));
        }
        card.append(ranking);
      }
      body.append(card);
    }

    body.append(
      eventFeed(view.events, (ev) => {
        switch (ev.kind) {
          case 'bid_accepted':
            return `${ev.label} bid ${formatAmount(ev.amount as number, view.currency)}`;
          case 'extended':
            return 'auction extended';
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
