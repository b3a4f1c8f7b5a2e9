// Wire types for the server's view stream and command API.
// The client renders only fields present in its received view; masked
// values are absent, never reconstructed.

export type RoleName = 'auctioneer' | 'bidder' | 'originator' | 'guest';

export interface Session {
  auction_id: string;
  participant_id: string;
  role: RoleName;
}

export interface BidderLabel {
  label: string;
  you: boolean;
}

export interface SlotView {
  slot_id?: string;
  slot?: number; // guest slots are positional
  description?: string;
  quantity?: number;
  unit?: string;
  delivery_point?: string;
  step?: number;
  bid_count: number;
  min_acceptable?: number | null;
  leading?: { label?: string; bidder_id?: string; amount: number } | null;
  leading_percent?: number | null;
  my_best?: number | null;
  my_rank?: number | null;
  bidder_labels?: BidderLabel[];
  ranking?: { label?: string; bidder_id?: string; amount: number }[];
  bids?: Record<string, unknown>[];
}

export interface ViewEvent {
  seq: number;
  at: number;
  kind: string;
  [key: string]: unknown;
}

export interface View {
  auction_id: string;
  role: RoleName;
  status: 'scheduled' | 'open' | 'extended' | 'closed' | 'cancelled';
  format: 'english' | 'reverse' | 'dutch' | 'multi_round' | 'multi_phase';
  direction: 'ascending' | 'descending';
  as_of_seq: number;
  time_remaining_ms: number | null;
  opens_in_ms?: number | null;
  now_close: number;
  extension_count: number;
  competitor_count_online: number;
  competitor_count_total: number;
  admitted?: boolean;
  currency?: string;
  historic_value?: number | null;
  target_value?: number | null;
  target_hit?: boolean | null;
  current_round?: number;
  rounds?: number;
  current_phase?: number;
  phases?: number;
  phase_target?: number;
  bid_count?: number;
  dutch?: { price?: number; remaining?: number; supply?: number; price_percent?: number | null };
  slots: SlotView[];
  events: ViewEvent[];
  server_now?: number;
}

export interface BidAck {
  accepted: boolean;
  reason: string | null;
  seq: number;
  min_acceptable: number | null;
}
