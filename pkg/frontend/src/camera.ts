// Restricted orbit camera: rotate and dolly only. The look-at target is
// fixed at construction and there is deliberately no pan path; scenes are
// z-up, so the orbit runs around the vertical axis.

import { PerspectiveCamera, Vector3 } from "three";

export interface HomePose {
  target: [number, number, number];
  radius: number;
  theta: number;
  phi: number;
}

const PHI_MIN = 0.05;
const PHI_MAX = Math.PI - 0.05;

export function homeFromBounds(min: number[], max: number[]): HomePose {
  const target: [number, number, number] = [
    (min[0] + max[0]) / 2,
    (min[1] + max[1]) / 2,
    (min[2] + max[2]) / 2,
  ];
  const diag = Math.hypot(max[0] - min[0], max[1] - min[1], max[2] - min[2]);
  return {
    target,
    radius: Math.max(diag * 1.4, 1e-3),
    theta: -Math.PI / 2, // look from the south so lon/lat reads naturally
    phi: Math.PI / 3,
  };
}

export interface CameraState {
  theta: number;
  phi: number;
  radius: number;
  target: [number, number, number];
}

export class RestrictedOrbitCamera {
  readonly camera: PerspectiveCamera;

  private theta: number;
  private phi: number;
  private radius: number;
  private readonly fixedTarget: Vector3;
  private readonly minRadius: number;
  private readonly maxRadius: number;

  constructor(private readonly home: HomePose, aspect = 1.0) {
    this.theta = home.theta;
    this.phi = home.phi;
    this.radius = home.radius;
    this.fixedTarget = new Vector3(...home.target);
    this.minRadius = home.radius / 20;
    this.maxRadius = home.radius * 10;
    this.camera = new PerspectiveCamera(50, aspect, this.minRadius / 10, this.maxRadius * 10);
    this.camera.up.set(0, 0, 1);
    this.apply();
  }

  get target(): [number, number, number] {
    return [this.fixedTarget.x, this.fixedTarget.y, this.fixedTarget.z];
  }

  state(): CameraState {
    return {
      theta: this.theta,
      phi: this.phi,
      radius: this.radius,
      target: this.target,
    };
  }

  rotate(dTheta: number, dPhi: number): void {
    this.theta += dTheta;
    this.phi = Math.min(PHI_MAX, Math.max(PHI_MIN, this.phi + dPhi));
    this.apply();
  }

  /** factor > 1 dollies out, < 1 in; clamped to a sane range. */
  zoom(factor: number): void {
    if (!(factor > 0)) throw new Error("zoom factor must be positive");
    this.radius = Math.min(this.maxRadius, Math.max(this.minRadius, this.radius * factor));
    this.apply();
  }

  reset(): void {
    this.theta = this.home.theta;
    this.phi = this.home.phi;
    this.radius = this.home.radius;
    this.apply();
  }

  setAspect(aspect: number): void {
    this.camera.aspect = aspect;
    this.camera.updateProjectionMatrix();
  }

  private apply(): void {
    const sinPhi = Math.sin(this.phi);
    this.camera.position.set(
      this.fixedTarget.x + this.radius * sinPhi * Math.cos(this.theta),
      this.fixedTarget.y + this.radius * sinPhi * Math.sin(this.theta),
      this.fixedTarget.z + this.radius * Math.cos(this.phi),
    );
    this.camera.lookAt(this.fixedTarget);
  }
}

export interface PointerLike {
  buttons: number;
  movementX: number;
  movementY: number;
  shiftKey?: boolean;
  preventDefault?(): void;
}

export interface WheelLike {
  deltaY: number;
  preventDefault?(): void;
}

const ROTATE_SPEED = 0.005;
const ZOOM_SPEED = 0.0015;

/** Translate raw input into the two allowed motions.
 *
 * Every drag rotates and every wheel tick dollies, whatever the button or
 * modifier: the gestures that would pan elsewhere do the permitted thing
 * here instead of a forbidden one.
 */
export class CameraInput {
  constructor(private readonly cam: RestrictedOrbitCamera) {}

  pointerDrag(ev: PointerLike): void {
    if (ev.buttons === 0) return;
    ev.preventDefault?.();
    this.cam.rotate(-ev.movementX * ROTATE_SPEED, -ev.movementY * ROTATE_SPEED);
  }

  wheel(ev: WheelLike): void {
    ev.preventDefault?.();
    this.cam.zoom(Math.exp(ev.deltaY * ZOOM_SPEED));
  }

  attach(el: {
    addEventListener(type: string, cb: (ev: any) => void): void;
  }): void {
    el.addEventListener("pointermove", (ev: PointerLike) => this.pointerDrag(ev));
    el.addEventListener("wheel", (ev: WheelLike) => this.wheel(ev));
    el.addEventListener("contextmenu", (ev: { preventDefault?(): void }) =>
      ev.preventDefault?.(),
    );
  }
}
