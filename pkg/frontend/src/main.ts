// Boot: resolve the token to a role, mount that role's console, attach
// the view stream. One page per role; the token decides which.

import { ApiClient } from './api';
import { AuctioneerConsole } from './render/auctioneer';
import { BidderConsole } from './render/bidder';
import { GuestConsole } from './render/guest';
import { OriginatorConsole } from './render/originator';
import { ViewStream } from './stream';
import type { View } from './types';

interface Console {
  root: HTMLElement;
  update(view: View): void;
  shell: { setConnected(up: boolean): void; startClock(): void };
}

function buildConsole(role: string, api: ApiClient): Console {
  switch (role) {
    case 'auctioneer':
      return new AuctioneerConsole(api);
    case 'originator':
      return new OriginatorConsole();
    case 'guest':
      return new GuestConsole();
    default:
      return new BidderConsole(api);
  }
}

async function boot(): Promise<void> {
  const mount = document.getElementById('app');
  if (!mount) return;
  const params = new URLSearchParams(window.location.search);
  const token = params.get('token') ?? window.localStorage.getItem('gavel_token');
  const base = params.get('server') ?? '';
  if (!token) {
    mount.textContent = 'missing ?token=… in the URL';
    return;
  }
  window.localStorage.setItem('gavel_token', token);

  const api = new ApiClient(base, token);
  const session = await api.session();
  const console_ = buildConsole(session.role, api);
  mount.textContent = '';
  mount.append(console_.root);
  console_.shell.startClock();

  const stream = new ViewStream(api.streamUrl(session.auction_id), token, {
    onView: (view) => console_.update(view),
    onStatus: (up) => console_.shell.setConnected(up),
  });
  stream.start();
}

void boot();
