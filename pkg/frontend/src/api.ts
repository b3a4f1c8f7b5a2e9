// Thin typed wrapper over the command API. The server is the sole
// validator; this client just ships commands and surfaces wire codes.

import type { BidAck, Session } from './types';

export class ApiError extends Error {
  constructor(
    public code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { 'Content-Type': 'application/json' } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(payload.error ?? `HTTP_${resp.status}`, payload.detail ?? resp.statusText);
    }
    return payload as T;
  }

  session(): Promise<Session> {
    return this.request('GET', '/api/session');
  }

  view(auctionId: string): Promise<Record<string, unknown>> {
    return this.request('GET', `/api/auctions/${auctionId}/view`);
  }

  bid(auctionId: string, slotId: string, amount: number): Promise<BidAck> {
    return this.request('POST', `/api/auctions/${auctionId}/bids`, { slot_id: slotId, amount });
  }

  dutchAccept(auctionId: string, quantity: number): Promise<{ accepted: boolean; price: number; remaining: number }> {
    return this.request('POST', `/api/auctions/${auctionId}/dutch-accept`, { quantity });
  }

  open(auctionId: string): Promise<{ opened: boolean }> {
    return this.request('POST', `/api/auctions/${auctionId}/open`);
  }

  cancel(auctionId: string): Promise<{ cancelled: boolean }> {
    return this.request('POST', `/api/auctions/${auctionId}/cancel`);
  }

  report(auctionId: string): Promise<Record<string, unknown>> {
    return this.request('GET', `/api/auctions/${auctionId}/report`);
  }

  streamUrl(auctionId: string): string {
    return `${this.baseUrl}/api/auctions/${auctionId}/stream`;
  }

  get authToken(): string {
    return this.token;
  }
}
