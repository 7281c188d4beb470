import { describe, expect, it } from "vitest";

import { resampleStroke, strokeToTrack } from "../src/stroke";
import type { StrokePoint } from "../src/types";

function pt(x: number, y: number, t = 0, visible = true): StrokePoint {
  return { x, y, t, visible };
}

describe("resampleStroke", () => {
  it("turns a straight 2-point stroke into 1+T collinear equally spaced points", () => {
    const out = resampleStroke([pt(2, 3, 0), pt(26, 3, 800)], 9);
    expect(out).toHaveLength(9);
    for (let i = 0; i < 9; i++) {
      expect(out[i].x).toBeCloseTo(2 + (24 * i) / 8, 10);
      expect(out[i].y).toBeCloseTo(3, 10);
    }
    // consecutive spacing uniform
    const gaps = out.slice(1).map((p, i) => Math.hypot(p.x - out[i].x, p.y - out[i].y));
    for (const g of gaps) expect(g).toBeCloseTo(3, 10);
  });

  it("preserves endpoints exactly", () => {
    const jagged = [pt(0, 0), pt(3, 7), pt(11, 2), pt(30.25, 19.5)];
    const out = resampleStroke(jagged, 9);
    expect(out[0]).toMatchObject({ x: 0, y: 0 });
    expect(out[8]).toMatchObject({ x: 30.25, y: 19.5 });
  });

  it("keeps a closed loop closed (first equals last)", () => {
    const loop = [pt(5, 5), pt(20, 5), pt(20, 20), pt(5, 20), pt(5, 5)];
    const out = resampleStroke(loop, 9);
    expect(out[0].x).toBe(out[8].x);
    expect(out[0].y).toBe(out[8].y);
  });

  it("duplicates a single point into a stationary track", () => {
    const out = resampleStroke([pt(12, 7)], 9);
    expect(out).toHaveLength(9);
    for (const p of out) {
      expect(p.x).toBe(12);
      expect(p.y).toBe(7);
    }
  });

  it("handles a zero-length multi-point stroke", () => {
    const out = resampleStroke([pt(4, 4, 0), pt(4, 4, 100), pt(4, 4, 200)], 5);
    for (const p of out) expect([p.x, p.y]).toEqual([4, 4]);
  });

  it("carries visibility from the nearest source point", () => {
    const points = [pt(0, 0, 0, true), pt(10, 0, 100, true), pt(20, 0, 200, false)];
    const out = resampleStroke(points, 5);
    expect(out[0].visible).toBe(true);
    expect(out[4].visible).toBe(false);
  });

  it("resampled arc length is monotone along the stroke", () => {
    const points = [pt(0, 0), pt(8, 6), pt(16, 0), pt(24, 6)];
    const out = resampleStroke(points, 9);
    for (let i = 1; i < out.length; i++) {
      expect(out[i].x).toBeGreaterThanOrEqual(out[i - 1].x);
    }
  });

  it("rejects empty strokes and tiny frame counts", () => {
    expect(() => resampleStroke([], 9)).toThrow();
    expect(() => resampleStroke([pt(0, 0)], 1)).toThrow();
  });
});

describe("strokeToTrack", () => {
  it("round-trips coordinates through serialization within 1e-3", () => {
    const stroke = {
      trackId: 0,
      points: [pt(2.125, 3.5, 0), pt(14.75, 9.25, 50), pt(27.0625, 30.5, 100)],
    };
    const track = strokeToTrack(stroke, 9, 32, 32);
    const text = JSON.stringify(track);
    const parsed = JSON.parse(text);
    for (let i = 0; i < 9; i++) {
      expect(Math.abs(parsed.points[i][0] - track.points[i][0])).toBeLessThan(1e-3);
      expect(Math.abs(parsed.points[i][1] - track.points[i][1])).toBeLessThan(1e-3);
    }
    expect(parsed.points[0]).toEqual([2.125, 3.5]);
    expect(parsed.points[8]).toEqual([27.0625, 30.5]);
  });

  it("clamps out-of-frame points into bounds", () => {
    const track = strokeToTrack({ trackId: 1, points: [pt(-3, 2), pt(40, 33)] }, 5, 32, 32);
    for (const [x, y] of track.points) {
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(31);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(31);
    }
  });
});
