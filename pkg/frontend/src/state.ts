// Pure UI state logic. Everything here is synchronous and side-effect free
// so the behavior contract (frame stepping, playback stop, range handling,
// stale-response discard, log export) is unit-testable without a browser.

import type { FrameView, RenderLogEntry, VehicleView } from "./types.js";

export const DEFAULT_RANGE_M = 1000;
export const DEFAULT_TICK_MS = 500;
export const MIN_TICK_MS = 100;
export const MAX_TICK_MS = 2000;
export const MIN_RANGE_M = 1;

// Ten fills matching the service's color indices 0..9; partitions beyond
// ten reuse fills but carry a different character glyph.
export const PALETTE: readonly string[] = [
  "#e6194b",
  "#3cb44b",
  "#ffb000",
  "#4363d8",
  "#f58231",
  "#911eb4",
  "#42d4f4",
  "#f032e6",
  "#7f8c2b",
  "#469990",
];

export interface PinStyle {
  fill: string;
  glyph: string;
}

export function pinStyle(vehicle: VehicleView): PinStyle {
  const index = ((vehicle.color_index % PALETTE.length) + PALETTE.length) % PALETTE.length;
  return { fill: PALETTE[index], glyph: vehicle.character };
}

export interface UiState {
  datasetId: string | null;
  timestamps: number[];
  frameIndex: number;
  rangeM: number;
  tickMs: number;
  playing: boolean;
  lastView: FrameView | null;
  renderLog: RenderLogEntry[];
}

export function initialState(): UiState {
  return {
    datasetId: null,
    timestamps: [],
    frameIndex: 0,
    rangeM: DEFAULT_RANGE_M,
    tickMs: DEFAULT_TICK_MS,
    playing: false,
    lastView: null,
    renderLog: [],
  };
}

export function clampFrameIndex(index: number, frameCount: number): number {
  if (frameCount <= 0 || !Number.isFinite(index)) return 0;
  return Math.min(Math.max(Math.trunc(index), 0), frameCount - 1);
}

export interface FrameAdvance {
  frameIndex: number;
  playing: boolean;
}

// One playback tick: advance a frame, stopping on the last one.
export function advanceFrame(index: number, frameCount: number): FrameAdvance {
  const last = frameCount - 1;
  if (frameCount <= 0 || index >= last) {
    return { frameIndex: clampFrameIndex(index, frameCount), playing: false };
  }
  const next = index + 1;
  return { frameIndex: next, playing: next < last };
}

export function clampTickMs(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_TICK_MS;
  return Math.min(Math.max(Math.round(value), MIN_TICK_MS), MAX_TICK_MS);
}

export function clampRangeM(value: number): number {
  if (!Number.isFinite(value) || value < MIN_RANGE_M) return DEFAULT_RANGE_M;
  return value;
}

// Responses are stamped when issued; only the newest stamp may be applied,
// so an early request resolving late can never clobber the current frame.
export class FetchSequencer {
  private issued = 0;

  begin(): number {
    this.issued += 1;
    return this.issued;
  }

  isCurrent(seq: number): boolean {
    return seq === this.issued;
  }
}

export interface FrameRequest {
  datasetId: string;
  timestamp: number;
  rangeM: number;
  frameIndex: number;
}

// Keeps at most one frame fetch in flight. Requests arriving while one is
// outstanding collapse into a single trailing fetch (last request wins).
export class FrameFetchQueue {
  private inFlight = false;
  private pending: FrameRequest | null = null;

  constructor(private readonly run: (req: FrameRequest) => Promise<void>) {}

  request(req: FrameRequest): void {
    if (this.inFlight) {
      this.pending = req;
      return;
    }
    this.launch(req);
  }

  get busy(): boolean {
    return this.inFlight;
  }

  private launch(req: FrameRequest): void {
    this.inFlight = true;
    this.run(req)
      .catch(() => undefined) // the runner owns error handling; keep sequencing
      .finally(() => {
        this.inFlight = false;
        if (this.pending !== null) {
          const next = this.pending;
          this.pending = null;
          this.launch(next);
        }
      });
  }
}

export function renderLogToCsv(entries: readonly RenderLogEntry[]): string {
  const lines = ["frame_index,timestamp,vehicle_count,range_m,render_ms"];
  for (const e of entries) {
    lines.push(
      `${e.frame_index},${e.timestamp},${e.vehicle_count},${e.range_m},${e.render_ms.toFixed(3)}`,
    );
  }
  return lines.join("\n") + "\n";
}

export function meanRenderMs(entries: readonly RenderLogEntry[]): number {
  if (entries.length === 0) return 0;
  return entries.reduce((acc, e) => acc + e.render_ms, 0) / entries.length;
}
