// /api/stream subscription with a staleness watchdog.  The server sends
// heartbeats roughly every second while idle, so more than STALE_AFTER_MS
// of silence means the link (or server) is gone.

import { TickEvent } from "./protocol.js";

export const STALE_AFTER_MS = 2000;

export function isStale(lastEventAt: number | null, now: number): boolean {
  return lastEventAt === null || now - lastEventAt > STALE_AFTER_MS;
}

export interface StreamHandlers {
  onTick: (event: TickEvent) => void;
  onStatus: (connected: boolean) => void;
}

export class StreamClient {
  private ws: WebSocket | null = null;
  private lastEventAt: number | null = null;
  private watchdog: number | null = null;
  private reportedConnected = false;

  constructor(
    private url: string,
    private handlers: StreamHandlers,
    private now: () => number = () => Date.now(),
  ) {}

  connect(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onmessage = (msg) => {
      let event: TickEvent;
      try {
        event = JSON.parse(msg.data as string) as TickEvent;
      } catch {
        console.warn("malformed stream event dropped", msg.data);
        return; // keep the last good frame
      }
      if (!Array.isArray(event.joints) || event.joints.length !== 6) {
        console.warn("stream event missing joints", event);
        return;
      }
      this.lastEventAt = this.now();
      this.setConnected(true);
      this.handlers.onTick(event);
    };
    this.ws.onopen = () => {
      this.lastEventAt = this.now();
      this.setConnected(true);
    };
    this.ws.onclose = () => {
      this.setConnected(false);
      setTimeout(() => this.connect(), 1000);
    };
    this.ws.onerror = () => this.setConnected(false);
    if (this.watchdog === null) {
      this.watchdog = setInterval(() => {
        if (isStale(this.lastEventAt, this.now())) this.setConnected(false);
      }, 500) as unknown as number;
    }
  }

  private setConnected(connected: boolean): void {
    if (connected !== this.reportedConnected) {
      this.reportedConnected = connected;
      this.handlers.onStatus(connected);
    }
  }
}
