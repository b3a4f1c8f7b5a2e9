// Bidder console: live prices, own rank, competitor presence, bid entry
// with an advisory precheck mirroring the server's admission rule.

import type { ApiClient } from '../api';
import { ApiError } from '../api';
import { el, formatAmount } from '../format';
import type { SlotView, View } from '../types';
import { ConsoleShell, eventFeed } from './common';

export function precheckBid(view: View, slot: SlotView, amount: number): string | null {
  if (!Number.isInteger(amount) || amount <= 0) return 'enter a positive whole amount';
  const bound = slot.min_acceptable;
  if (bound === null || bound === undefined) return null;
  if (view.direction === 'descending' && amount > bound) {
    return `must be at most ${formatAmount(bound, view.currency)}`;
  }
  if (view.direction === 'ascending' && amount < bound) {
    return `must be at least ${formatAmount(bound, view.currency)}`;
  }
  return null;
}

export class BidderConsole {
  readonly shell = new ConsoleShell('bidder console');
  private view: View | null = null;
  private drafts = new Map<string, string>();

  constructor(private api: ApiClient) {}

  get root(): HTMLElement {
    return this.shell.root;
  }

  update(view: View): void {
    this.view = view;
    this.shell.absorb(view);
    const body = this.shell.body;
    body.textContent = '';

    const stats = el('div', 'stat-row');
    stats.append(
      stat('extensions', String(view.extension_count)),
      stat('competitors online', String(view.competitor_count_online)),
      stat('competitors total', String(view.competitor_count_total)),
    );
    if (view.admitted === false) {
      stats.append(el('span', 'excluded-flag', 'excluded from this phase'));
    }
    if (view.current_phase !== undefined) {
      stats.append(stat('phase', `${view.current_phase}/${view.phases}`));
      if (view.phase_target !== undefined) {
        stats.append(stat('phase target', formatAmount(view.phase_target, view.currency)));
      }
    }
    if (view.current_round !== undefined) {
      stats.append(stat('round', `${view.current_round}/${view.rounds}`));
    }
    body.append(stats);

    if (view.dutch) {
      body.append(this.dutchPanel(view));
    }
    for (const slot of view.slots) {
      body.append(this.slotCard(view, slot));
    }
    body.append(
      eventFeed(view.events, (ev) => {
        switch (ev.kind) {
          case 'bid_accepted':
            return `${ev.label} bid ${formatAmount(ev.amount as number, view.currency)}`;
          case 'bid_rejected':
            return `your bid was rejected: ${ev.reason}`;
          case 'extended':
            return 'auction extended';
          case 'round_closed':
            return `round ${ev.round} closed`;
          case 'phase_advanced':
            return `phase ${ev.phase_closed} closed`;
          case 'dutch_tick':
            return `price now ${formatAmount(ev.price as number, view.currency)}`;
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

  private dutchPanel(view: View): HTMLElement {
    const panel = el('section', 'dutch-panel');
    panel.append(
      el('div', 'dutch-price', formatAmount(view.dutch?.price ?? 0, view.currency)),
      el('div', 'dutch-remaining', `${view.dutch?.remaining} of ${view.dutch?.supply} remaining`),
    );
    const form = el('form', 'accept-form');
    const qty = el('input') as HTMLInputElement;
    qty.type = 'number';
    qty.min = '1';
    qty.value = '1';
    qty.className = 'quantity-input';
    const button = el('button', 'accept-button', 'accept at current price');
    const note = el('span', 'form-note');
    form.append(qty, button, note);
    form.addEventListener('submit', (e) => {
      e.preventDefault();
      void this.api
        .dutchAccept(view.auction_id, Number(qty.value))
        .then((ack) => (note.textContent = `bought at ${formatAmount(ack.price, view.currency)}`))
        .catch((err: unknown) => (note.textContent = err instanceof ApiError ? err.code : String(err)));
    });
    panel.append(form);
    return panel;
  }

  private slotCard(view: View, slot: SlotView): HTMLElement {
    const card = el('section', 'slot-card');
    card.dataset.slotId = slot.slot_id;
    card.append(el('h2', 'slot-title', `${slot.description ?? slot.slot_id}`));
    card.append(
      el('div', 'slot-meta', `${slot.quantity} ${slot.unit} to ${slot.delivery_point}`),
    );
    const leading = el('div', 'leading');
    if (slot.leading) {
      const who = slot.leading.label === 'you' ? 'you' : slot.leading.label;
      leading.textContent = `leading: ${formatAmount(slot.leading.amount, view.currency)} (${who})`;
      leading.classList.toggle('leading-you', slot.leading.label === 'you');
    } else {
      leading.textContent = 'no bids yet';
    }
    card.append(leading);
    const rank = el('div', 'my-rank');
    rank.textContent =
      slot.my_rank != null
        ? `your rank: ${slot.my_rank}${slot.my_best != null ? ` (best ${formatAmount(slot.my_best, view.currency)})` : ''}`
        : 'you have not bid';
    card.append(rank);
    if (slot.min_acceptable != null) {
      card.append(
        el(
          'div',
          'min-acceptable',
          `next admissible: ${formatAmount(slot.min_acceptable, view.currency)}`,
        ),
      );
    }

    const form = el('form', 'bid-form');
    const input = el('input') as HTMLInputElement;
    input.type = 'number';
    input.className = 'bid-input';
    input.placeholder = 'amount in minor units';
    input.value = this.drafts.get(slot.slot_id ?? '') ?? '';
    const warning = el('span', 'bid-warning');
    const button = el('button', 'bid-button', 'place bid') as HTMLButtonElement;
    const open = view.status === 'open' || view.status === 'extended';
    button.disabled = !open || view.admitted === false;
    form.append(input, button, warning);

    input.addEventListener('input', () => {
      this.drafts.set(slot.slot_id ?? '', input.value);
      const problem = input.value === '' ? null : precheckBid(view, slot, Number(input.value));
      warning.textContent = problem ?? '';
      warning.classList.toggle('active', problem !== null);
    });
    form.addEventListener('submit', (e) => {
      e.preventDefault();
      const amount = Number(input.value);
      void this.api
        .bid(view.auction_id, slot.slot_id ?? '', amount)
        .then((ack) => {
          warning.classList.toggle('active', !ack.accepted);
          warning.textContent = ack.accepted ? 'accepted' : `rejected: ${ack.reason}`;
          if (ack.accepted) {
            input.value = '';
            this.drafts.delete(slot.slot_id ?? '');
          }
        })
        .catch((err: unknown) => {
          warning.classList.add('active');
          warning.textContent = err instanceof ApiError ? `rejected: ${err.code}` : String(err);
        });
    });
    card.append(form);
    return card;
  }
}

function stat(label: string, value: string): HTMLElement {
  const box = el('span', 'stat');
  box.append(el('span', 'stat-label', label), el('span', 'stat-value', value));
  return box;
}
