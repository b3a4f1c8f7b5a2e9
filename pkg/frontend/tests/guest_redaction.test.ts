// End-to-end redaction: play entire recorded auctions through the guest
// console and scan the DOM after every frame. Nothing that names the
// currency, amounts, participants, or goods may ever appear.

import { readFileSync } from 'node:fs';
import { resolve } from 'node:path';
import { describe, expect, it } from 'vitest';

import { GuestConsole } from '../src/render/guest';
import type { View } from '../src/types';

function load(name: string): Record<string, View[]> {
  return JSON.parse(readFileSync(resolve(process.cwd(), 'tests/fixtures', name), 'utf-8'));
}

const FIXTURES: { file: string; secrets: string[]; amounts: number[] }[] = [
  {
    file: 'reverse_sniper_streams.json',
    secrets: ['EUR', 'norco', 'ferrum', 'baltic', 'steel', 'plant-north', 'lot-1'],
    amounts: [180_000, 165_000, 166_000, 163_000, 170_000],
  },
  {
    file: 'multi_phase_streams.json',
    secrets: ['EUR', 'norco', 'ferrum', 'watcher', 'aluminium', 'plant-north', 'lot-1'],
    amounts: [100_000, 95_000, 92_000, 90_000, 88_000],
  },
  {
    file: 'dutch_streams.json',
    secrets: ['EUR', 'florex', 'bloom', 'verda', 'tulip', 'plant-north', 'lot-1'],
    amounts: [2_000, 1_800, 1_650, 1_500, 1_200],
  },
];

describe('guest console redaction', () => {
  for (const fixture of FIXTURES) {
    it(`leaks nothing from ${fixture.file}`, () => {
      const streams = load(fixture.file);
      const guestViews = streams['guest']!;
      document.body.innerHTML = '';
      const console_ = new GuestConsole();
      document.body.append(console_.root);
      for (const view of guestViews) {
        console_.update(view);
        const dom = document.body.innerHTML;
        const text = document.body.textContent ?? '';
        for (const secret of fixture.secrets) {
          expect(dom).not.toContain(secret);
        }
        // amounts must not appear as standalone numbers in the visible text
        const tokens = new Set((text.match(/\d+(?:\.\d+)?/g) ?? []).map(Number));
        for (const amount of fixture.amounts) {
          expect(tokens.has(amount)).toBe(false);
        }
      }
      // the console still shows the auction's life: percentages and a close
      expect(document.body.textContent).toContain('%');
      const last = guestViews.at(-1)!;
      if (last.status === 'closed') {
        expect(document.body.textContent).toContain('closed');
      }
    });
  }

  it('renders the percentage trajectory as the auction progresses', () => {
    const streams = load('reverse_sniper_streams.json');
    document.body.innerHTML = '';
    const console_ = new GuestConsole();
    document.body.append(console_.root);
    let maxBars = 0;
    for (const view of streams['guest']!) {
      console_.update(view);
      maxBars = Math.max(maxBars, console_.root.querySelectorAll('.trajectory-bar').length);
    }
    expect(maxBars).toBeGreaterThan(3); // several accepted bids charted
    const percent = console_.root.querySelector('.leading-percent')!.textContent!;
    expect(percent).toMatch(/^\d+\.\d%$/);
  });
});
