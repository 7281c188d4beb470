import { describe, expect, it } from "vitest";

import { Scrubber, badgesFromReport, formatEpeBadge, overlayMarkersAtFrame } from "../src/playback";
import { decodeTensor, encodeTensor, videoAt } from "../src/wmt";
import type { Track } from "../src/types";

describe("Scrubber", () => {
  it("clamps seeks into range and labels 1-based", () => {
    const s = new Scrubber(9);
    expect(s.seek(12)).toBe(8);
    expect(s.seek(-3)).toBe(0);
    expect(s.step(2)).toBe(2);
    expect(s.label).toBe("frame 3 / 9");
  });
});

describe("overlayMarkersAtFrame", () => {
  const tracks: Track[] = [
    {
      id: 0,
      points: Array.from({ length: 9 }, (_, f) => [2 + 3 * f, 7] as [number, number]),
      visible: Array.from({ length: 9 }, (_, f) => f !== 4),
    },
  ];

  it("returns authored positions exactly at keyframes", () => {
    expect(overlayMarkersAtFrame(tracks, 0)[0]).toMatchObject({ x: 2, y: 7, visible: true });
    expect(overlayMarkersAtFrame(tracks, 8)[0]).toMatchObject({ x: 26, y: 7 });
    expect(overlayMarkersAtFrame(tracks, 4)[0].visible).toBe(false);
  });
});

describe("EPE badges", () => {
  it("formats to displayed precision", () => {
    expect(formatEpeBadge(2.5)).toBe("EPE 2.50 px");
    expect(formatEpeBadge(0.123456)).toBe("EPE 0.12 px");
    expect(formatEpeBadge(undefined)).toBe("EPE –");
  });

  it("badge text matches the report value exactly as displayed", () => {
    const report = {
      w: 5,
      steps: 50,
      seed: 0,
      epe: 2.3456789,
      per_track_epe: { "0": 2.3456789, "2": 0.999 },
    };
    const badges = badgesFromReport(report);
    expect(badges).toEqual([
      { trackId: 0, text: "EPE 2.35 px" },
      { trackId: 2, text: "EPE 1.00 px" },
    ]);
    // displayed summary and per-track badge derive from the same JSON values
    expect(formatEpeBadge(report.epe)).toBe("EPE 2.35 px");
  });
});

describe("WMT1 tensors", () => {
  it("round-trips and indexes like the server layout", () => {
    const dims = [2, 3, 4, 3];
    const data = new Float32Array(dims.reduce((a, b) => a * b, 1));
    for (let i = 0; i < data.length; i++) data[i] = i / 10;
    const decoded = decodeTensor(encodeTensor({ dims, data }));
    expect(decoded.dims).toEqual(dims);
    expect(videoAt(decoded, 1, 2, 3, 2)).toBeCloseTo(data[((1 * 3 + 2) * 4 + 3) * 3 + 2], 6);
  });

  it("rejects bad magic and size mismatches", () => {
    expect(() => decodeTensor(new ArrayBuffer(3))).toThrow();
    const good = encodeTensor({ dims: [4], data: new Float32Array([1, 2, 3, 4]) });
    expect(() => decodeTensor(good.slice(0, good.byteLength - 4))).toThrow();
  });
});
