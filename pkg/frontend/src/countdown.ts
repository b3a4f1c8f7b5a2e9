// Countdown to the auction close, anchored on server time.
//
// Every pushed view carries server_now; the measured offset
// (server_now - local receive time) converts the server's close
// timestamp into local wall time, keeping drift well under a second
// regardless of how wrong the local clock is.

export class Countdown {
  private offsetMs = 0;
  private closeAt: number | null = null;

  noteServerTime(serverNow: number, localNow: number = Date.now()): void {
    this.offsetMs = serverNow - localNow;
  }

  setClose(nowClose: number | null): void {
    this.closeAt = nowClose;
  }

  remainingMs(localNow: number = Date.now()): number | null {
    if (this.closeAt === null) return null;
    return Math.max(0, this.closeAt - (localNow + this.offsetMs));
  }

  get offset(): number {
    return this.offsetMs;
  }
}

export function formatRemaining(ms: number | null): string {
  if (ms === null) return '--:--';
  const total = Math.floor(ms / 1000);
  const hours = Math.floor(total / 3600);
  const minutes = Math.floor((total % 3600) / 60);
  const seconds = total % 60;
  const mmss = `${String(minutes).padStart(2, '0')}:${String(seconds).padStart(2, '0')}`;
  return hours > 0 ? `${hours}:${mmss}` : mmss;
}
