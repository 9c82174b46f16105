// Client-side forward kinematics, mirroring the server's two-link model
// so the console can draw poses straight from joint angles.

export interface Geometry {
  l1: number;
  l2: number;
}

export interface PlanarPoint {
  a: number; // horizontal in the bend plane (mm)
  b: number; // vertical in the bend plane (mm)
}

/** In-plane wrist position from shoulder and elbow angles. */
export function forwardPlanar(geom: Geometry, theta2: number, theta3: number): PlanarPoint {
  const phi = theta2 + theta3 - Math.PI;
  return {
    a: geom.l1 * Math.cos(theta2) + geom.l2 * Math.cos(phi),
    b: geom.l1 * Math.sin(theta2) + geom.l2 * Math.sin(phi),
  };
}

/** Elbow position, for drawing the first link. */
export function elbowPlanar(geom: Geometry, theta2: number): PlanarPoint {
  return { a: geom.l1 * Math.cos(theta2), b: geom.l1 * Math.sin(theta2) };
}

export interface Xyz {
  x: number;
  y: number;
  z: number;
}

/** World-frame endpoint: bend-plane FK swung by the base azimuth. */
export function endpointXyz(geom: Geometry, joints: number[]): Xyz {
  const [theta1, theta2, theta3] = joints;
  const { a, b } = forwardPlanar(geom, theta2, theta3);
  return { x: a * Math.cos(theta1), y: a * Math.sin(theta1), z: b };
}
