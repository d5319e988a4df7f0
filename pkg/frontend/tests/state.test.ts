import { describe, expect, it } from "vitest";

import {
  DEFAULT_RANGE_M,
  DEFAULT_TICK_MS,
  FetchSequencer,
  FrameFetchQueue,
  PALETTE,
  advanceFrame,
  clampFrameIndex,
  clampRangeM,
  clampTickMs,
  initialState,
  meanRenderMs,
  pinStyle,
  renderLogToCsv,
  type FrameRequest,
} from "../src/state.js";
import type { FrameView, VehicleView } from "../src/types.js";

function vehicle(
  id: string,
  partitionIndex: number,
  colorIndex: number,
  character: string,
): VehicleView {
  return {
    vehicle_id: id,
    latitude: 42.3,
    longitude: -83.6,
    speed: 10,
    partition_index: partitionIndex,
    color_index: colorIndex,
    character,
  };
}

// the chain dataset as the service reports it at both reference ranges
const chainAt1000: FrameView = {
  timestamp: 0,
  range_m: 1000,
  partition_count: 1,
  squarings: 2,
  distance_ms: 0.01,
  closure_ms: 0.02,
  vehicles: [
    vehicle("v1", 0, 0, "A"),
    vehicle("v2", 0, 0, "A"),
    vehicle("v3", 0, 0, "A"),
  ],
};

const chainAt500: FrameView = {
  timestamp: 0,
  range_m: 500,
  partition_count: 3,
  squarings: 1,
  distance_ms: 0.01,
  closure_ms: 0.02,
  vehicles: [
    vehicle("v1", 0, 0, "A"),
    vehicle("v2", 1, 1, "A"),
    vehicle("v3", 2, 2, "A"),
  ],
};

describe("pinStyle", () => {
  it("gives the connected chain three identical pins", () => {
    const styles = chainAt1000.vehicles.map(pinStyle);
    expect(new Set(styles.map((s) => `${s.fill}/${s.glyph}`)).size).toBe(1);
    expect(styles[0].glyph).toBe("A");
    expect(styles[0].fill).toBe(PALETTE[0]);
  });

  it("gives the split chain three distinct pins", () => {
    const styles = chainAt500.vehicles.map(pinStyle);
    expect(new Set(styles.map((s) => `${s.fill}/${s.glyph}`)).size).toBe(3);
  });

  it("mirrors partition identity for the full label cycle", () => {
    // one vehicle per partition across the whole 260-label wheel
    const vehicles = Array.from({ length: 260 }, (_, p) =>
      vehicle(`v${p}`, p, p % 10, String.fromCharCode(65 + Math.floor(p / 10))),
    );
    const keys = vehicles.map((v) => {
      const s = pinStyle(v);
      return `${s.fill}/${s.glyph}`;
    });
    expect(new Set(keys).size).toBe(260);
    // and equal partition indices always produce equal styles
    const twin = pinStyle(vehicles[42]);
    expect(pinStyle({ ...vehicles[42], vehicle_id: "other" })).toEqual(twin);
  });

  it("uses all ten palette entries before repeating", () => {
    const fills = Array.from({ length: 10 }, (_, c) =>
      pinStyle(vehicle("v", c, c, "A")).fill,
    );
    expect(new Set(fills).size).toBe(10);
  });
});

describe("frame stepping", () => {
  it("clamps indices to the frame list", () => {
    expect(clampFrameIndex(-3, 10)).toBe(0);
    expect(clampFrameIndex(4, 10)).toBe(4);
    expect(clampFrameIndex(99, 10)).toBe(9);
    expect(clampFrameIndex(0, 0)).toBe(0);
    expect(clampFrameIndex(2.7, 10)).toBe(2);
  });

  it("playback traverses a 10-frame dataset and stops on the last", () => {
    let index = 0;
    let playing = true;
    const visited = [0];
    while (playing) {
      const step = advanceFrame(index, 10);
      index = step.frameIndex;
      playing = step.playing;
      visited.push(index);
    }
    expect(visited).toEqual([0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    expect(index).toBe(9);
  });

  it("stays put when already on the final frame", () => {
    expect(advanceFrame(9, 10)).toEqual({ frameIndex: 9, playing: false });
    expect(advanceFrame(0, 1)).toEqual({ frameIndex: 0, playing: false });
    expect(advanceFrame(0, 0)).toEqual({ frameIndex: 0, playing: false });
  });
});

describe("control clamping", () => {
  it("keeps the tick interval within 100..2000 ms", () => {
    expect(clampTickMs(500)).toBe(500);
    expect(clampTickMs(50)).toBe(100);
    expect(clampTickMs(99999)).toBe(2000);
    expect(clampTickMs(Number.NaN)).toBe(DEFAULT_TICK_MS);
    expect(clampTickMs(333.4)).toBe(333);
  });

  it("falls back to the default range on nonsense input", () => {
    expect(clampRangeM(500)).toBe(500);
    expect(clampRangeM(0)).toBe(DEFAULT_RANGE_M);
    expect(clampRangeM(-10)).toBe(DEFAULT_RANGE_M);
    expect(clampRangeM(Number.NaN)).toBe(DEFAULT_RANGE_M);
  });

  it("starts with sensible defaults", () => {
    const state = initialState();
    expect(state.rangeM).toBe(1000);
    expect(state.tickMs).toBe(500);
    expect(state.playing).toBe(false);
    expect(state.renderLog).toEqual([]);
  });
});

describe("FetchSequencer", () => {
  it("discards responses superseded by a newer request", () => {
    const seq = new FetchSequencer();
    const first = seq.begin();
    const second = seq.begin();
    expect(seq.isCurrent(first)).toBe(false);
    expect(seq.isCurrent(second)).toBe(true);
    const third = seq.begin();
    expect(seq.isCurrent(second)).toBe(false);
    expect(seq.isCurrent(third)).toBe(true);
  });
});

describe("FrameFetchQueue", () => {
  function request(frameIndex: number, rangeM = 1000): FrameRequest {
    return { datasetId: "d", timestamp: frameIndex * 100, rangeM, frameIndex };
  }

  it("runs at most one fetch at a time and coalesces to the newest", async () => {
    const started: number[] = [];
    let release: (() => void) | null = null;
    const queue = new FrameFetchQueue((req) => {
      started.push(req.frameIndex);
      return new Promise<void>((resolve) => {
        release = resolve;
      });
    });

    queue.request(request(0));
    expect(queue.busy).toBe(true);
    // three more arrive while the first is still in flight
    queue.request(request(1));
    queue.request(request(2));
    queue.request(request(3));
    expect(started).toEqual([0]);

    release!();
    await Promise.resolve();
    await Promise.resolve();
    expect(started).toEqual([0, 3]); // 1 and 2 were coalesced away

    release!();
    await Promise.resolve();
    await Promise.resolve();
    expect(queue.busy).toBe(false);
  });

  it("keeps accepting work after a fetch fails", async () => {
    const seen: number[] = [];
    const queue = new FrameFetchQueue(async (req) => {
      seen.push(req.frameIndex);
      if (req.frameIndex === 0) throw new Error("boom");
    });
    queue.request(request(0));
    await new Promise((r) => setTimeout(r, 0));
    queue.request(request(1));
    await new Promise((r) => setTimeout(r, 0));
    expect(seen).toEqual([0, 1]);
    expect(queue.busy).toBe(false);
  });
});

describe("render log export", () => {
  it("serializes entries as CSV", () => {
    const csv = renderLogToCsv([
      { frame_index: 0, timestamp: 0, vehicle_count: 3, range_m: 1000, render_ms: 1.23456 },
      { frame_index: 1, timestamp: 100, vehicle_count: 3, range_m: 500, render_ms: 0.5 },
    ]);
    expect(csv).toBe(
      "frame_index,timestamp,vehicle_count,range_m,render_ms\n" +
        "0,0,3,1000,1.235\n" +
        "1,100,3,500,0.500\n",
    );
  });

  it("exports just the header when the log is empty", () => {
    expect(renderLogToCsv([])).toBe(
      "frame_index,timestamp,vehicle_count,range_m,render_ms\n",
    );
  });

  it("averages render times", () => {
    expect(meanRenderMs([])).toBe(0);
    expect(
      meanRenderMs([
        { frame_index: 0, timestamp: 0, vehicle_count: 1, range_m: 1000, render_ms: 2 },
        { frame_index: 1, timestamp: 100, vehicle_count: 1, range_m: 1000, render_ms: 4 },
      ]),
    ).toBe(3);
  });
});
