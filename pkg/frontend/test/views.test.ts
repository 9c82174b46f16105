import { describe, expect, it } from "vitest";

import { isStale } from "../src/stream.js";
import {
  gaugeFraction,
  gaugeLabel,
  gripperDirection,
  gripperOpening,
  sideViewPoints,
} from "../src/views.js";

const GEOM = { l1: 100, l2: 100 };

describe("side view", () => {
  it("draws a straight horizontal arm at theta2=0, theta3=pi", () => {
    const pts = sideViewPoints(GEOM, 0, Math.PI, { x: 40, y: 260 });
    expect(pts.elbow.x).toBeCloseTo(140, 6);
    expect(pts.elbow.y).toBeCloseTo(260, 6);
    expect(pts.wrist.x).toBeCloseTo(240, 6);
    expect(pts.wrist.y).toBeCloseTo(260, 6);
  });

  it("canvas y axis points down", () => {
    const pts = sideViewPoints(GEOM, Math.PI / 2, Math.PI, { x: 0, y: 0 });
    expect(pts.wrist.y).toBeCloseTo(-200, 6);
  });
});

describe("gauges", () => {
  it("labels 1500 us as 7.5% duty", () => {
    expect(gaugeLabel(1500)).toBe("1500 us / 7.5%");
  });

  it("labels the nominal servo band endpoints", () => {
    expect(gaugeLabel(1000)).toBe("1000 us / 5%");
    expect(gaugeLabel(2000)).toBe("2000 us / 10%");
  });

  it("fill fraction spans the protocol range", () => {
    expect(gaugeFraction(500)).toBe(0);
    expect(gaugeFraction(2500)).toBe(1);
    expect(gaugeFraction(1500)).toBeCloseTo(0.5, 9);
    expect(gaugeFraction(99999)).toBe(1);
  });
});

describe("gripper glyph", () => {
  it("closed at 0 rad, fully open at pi/2", () => {
    expect(gripperOpening(0)).toBe(0);
    expect(gripperOpening(Math.PI / 2)).toBe(12);
  });

  it("points horizontally whenever the joint angles sum to 2*pi", () => {
    expect(gripperDirection(Math.PI / 2, Math.PI / 2, Math.PI)).toBeCloseTo(0, 12);
    expect(gripperDirection(1.0, 1.2, 1.5)).toBeCloseTo(3.7 - 2 * Math.PI, 12);
  });
});

describe("stream staleness", () => {
  it("flags a gap over two seconds", () => {
    expect(isStale(1000, 3100)).toBe(true);
    expect(isStale(1000, 2900)).toBe(false);
    expect(isStale(null, 0)).toBe(true);
  });
});
