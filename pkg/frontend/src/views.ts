// Pure pixel geometry for the two orthographic arm views and the pulse
// gauges.  Kept free of canvas/DOM so the rendering math is testable.

import { elbowPlanar, forwardPlanar, Geometry } from "./fk.js";
import { PWM_PERIOD_US } from "./protocol.js";

/** Drawing scale: one pixel per millimetre. */
export const SCALE_PX_PER_MM = 1.0;

export interface Px {
  x: number;
  y: number;
}

export interface SideView {
  shoulder: Px;
  elbow: Px;
  wrist: Px;
}

/** Side view: the bend plane, +a right, +b up (canvas y grows down). */
export function sideViewPoints(
  geom: Geometry,
  theta2: number,
  theta3: number,
  origin: Px,
  scale: number = SCALE_PX_PER_MM,
): SideView {
  const elbow = elbowPlanar(geom, theta2);
  const wrist = forwardPlanar(geom, theta2, theta3);
  return {
    shoulder: origin,
    elbow: { x: origin.x + scale * elbow.a, y: origin.y - scale * elbow.b },
    wrist: { x: origin.x + scale * wrist.a, y: origin.y - scale * wrist.b },
  };
}

export interface TopView {
  base: Px;
  hand: Px;
}

/** Top view: base azimuth, +x right, +y up the screen. */
export function topViewPoints(
  geom: Geometry,
  theta1: number,
  theta2: number,
  theta3: number,
  origin: Px,
  scale: number = SCALE_PX_PER_MM,
): TopView {
  const { a } = forwardPlanar(geom, theta2, theta3);
  return {
    base: origin,
    hand: {
      x: origin.x + scale * a * Math.cos(theta1),
      y: origin.y - scale * a * Math.sin(theta1),
    },
  };
}

/** Gauge fill fraction over the protocol width range 500..2500 us. */
export function gaugeFraction(widthUs: number): number {
  const f = (widthUs - 500) / 2000;
  return Math.max(0, Math.min(1, f));
}

/** Duty-cycle label, e.g. "1500 us / 7.5%". */
export function gaugeLabel(widthUs: number): string {
  const pct = (widthUs / PWM_PERIOD_US) * 100;
  const rounded = Math.round(pct * 100) / 100;
  return `${widthUs} us / ${rounded}%`;
}

/** Gripper jaw half-opening in pixels for the glyph (0 closed). */
export function gripperOpening(gripperRad: number, maxPx: number = 12): number {
  const f = Math.max(0, Math.min(1, gripperRad / (Math.PI / 2)));
  return f * maxPx;
}

/**
 * Absolute gripper direction in the bend plane.  The wrist bend chains
 * onto link 2 the same way the elbow chains onto link 1, so the jaw
 * points along theta2 + theta3 + theta4 - 2*pi (zero = horizontal, which
 * is every pose the solver emits in its exact regime).
 */
export function gripperDirection(theta2: number, theta3: number, theta4: number): number {
  return theta2 + theta3 + theta4 - 2 * Math.PI;
}
