// Scene-graph assembly from an exported manifest: slot meshes in manifest
// (chronological) order stack bottom to top, each with a year label, plus
// separator outlines and one neutral probe pin per marked slot.

import {
  BufferGeometry,
  CanvasTexture,
  ConeGeometry,
  Group,
  Line,
  LineBasicMaterial,
  LineSegments,
  Mesh,
  MeshBasicMaterial,
  Object3D,
  Sprite,
  SpriteMaterial,
  Vector3,
} from "three";
import { GLTFLoader } from "three/addons/loaders/GLTFLoader.js";

import { ProbeMarker, SceneManifest } from "./api.js";
import { HomePose, homeFromBounds } from "./camera.js";

export class ManifestError extends Error {}

const PIN_COLOR = 0x555555;

export function checkManifest(manifest: SceneManifest): void {
  if (manifest.schema !== "surfstudy-scene/1") {
    throw new ManifestError(`unsupported scene schema '${manifest.schema}'`);
  }
  if (!Array.isArray(manifest.slots) || manifest.slots.length === 0) {
    throw new ManifestError("manifest has no slots");
  }
}

export function parseGlb(buffer: ArrayBuffer): Promise<Object3D> {
  return new Promise((resolve, reject) => {
    new GLTFLoader().parse(
      buffer,
      "",
      (gltf) => resolve(gltf.scene),
      (err) => reject(err instanceof Error ? err : new Error(String(err))),
    );
  });
}

function makeLabelSprite(text: string): Sprite {
  // canvas text needs a DOM; tests running without one still count sprites
  if (typeof document === "undefined") {
    return new Sprite(new SpriteMaterial());
  }
  const canvas = document.createElement("canvas");
  canvas.width = 256;
  canvas.height = 64;
  const ctx = canvas.getContext("2d")!;
  ctx.font = "48px sans-serif";
  ctx.fillStyle = "#333";
  ctx.textBaseline = "middle";
  ctx.fillText(text, 8, 32);
  const sprite = new Sprite(
    new SpriteMaterial({ map: new CanvasTexture(canvas), depthTest: false }),
  );
  return sprite;
}

function separatorOutline(z: number, min: number[], max: number[]): LineSegments {
  const [x0, y0] = [min[0], min[1]];
  const [x1, y1] = [max[0], max[1]];
  const geom = new BufferGeometry().setFromPoints([
    new Vector3(x0, y0, z), new Vector3(x1, y0, z),
    new Vector3(x1, y0, z), new Vector3(x1, y1, z),
    new Vector3(x1, y1, z), new Vector3(x0, y1, z),
    new Vector3(x0, y1, z), new Vector3(x0, y0, z),
  ]);
  return new LineSegments(geom, new LineBasicMaterial({ color: 0xaaaaaa }));
}

/** Base z and column height of each slot, bottom to top. */
function slotSpans(manifest: SceneManifest): { base: number; height: number }[] {
  const tops = manifest.slots.map((s, i) =>
    i + 1 < manifest.slots.length && manifest.slots[i + 1].translation[2] > s.translation[2]
      ? manifest.slots[i + 1].translation[2]
      : manifest.bounds.max[2],
  );
  return manifest.slots.map((s, i) => ({
    base: s.translation[2],
    height: tops[i] - s.translation[2],
  }));
}

function probePin(x: number, y: number, base: number, height: number): Group {
  const pin = new Group();
  const shaft = new Line(
    new BufferGeometry().setFromPoints([
      new Vector3(x, y, base),
      new Vector3(x, y, base + height),
    ]),
    new LineBasicMaterial({ color: PIN_COLOR }),
  );
  const head = new Mesh(
    new ConeGeometry(height * 0.02, height * 0.06, 12),
    new MeshBasicMaterial({ color: PIN_COLOR }),
  );
  head.position.set(x, y, base + height);
  head.rotation.x = Math.PI / 2; // cone points down the column
  pin.add(shaft, head);
  return pin;
}

export interface SceneGraph {
  root: Group;
  slotGroups: Group[];
  labels: Sprite[];
  separators: LineSegments[];
  pins: Group[];
  home: HomePose;
}

export function buildSceneGraph(
  manifest: SceneManifest,
  slotObjects: Object3D[],
  probes: ProbeMarker[] = [],
): SceneGraph {
  checkManifest(manifest);
  if (slotObjects.length !== manifest.slots.length) {
    throw new ManifestError(
      `${manifest.slots.length} slots in manifest, ${slotObjects.length} meshes given`,
    );
  }
  const root = new Group();
  const spans = slotSpans(manifest);
  const labelX = manifest.bounds.min[0];
  const labelY = manifest.bounds.min[1];

  const slotGroups: Group[] = [];
  const labels: Sprite[] = [];
  manifest.slots.forEach((slot, i) => {
    const group = new Group();
    group.name = `slot-${slot.year_label}`;
    group.add(slotObjects[i]);
    root.add(group);
    slotGroups.push(group);

    const label = makeLabelSprite(slot.year_label);
    label.position.set(labelX, labelY, spans[i].base + spans[i].height / 2);
    const extent = Math.max(
      manifest.bounds.max[0] - manifest.bounds.min[0],
      manifest.bounds.max[1] - manifest.bounds.min[1],
    );
    label.scale.set(extent * 0.12, extent * 0.03, 1);
    root.add(label);
    labels.push(label);
  });

  const separators = manifest.separators.map((z) =>
    separatorOutline(z, manifest.bounds.min, manifest.bounds.max),
  );
  separators.forEach((s) => root.add(s));

  const byYear = new Map(manifest.slots.map((s, i) => [s.year_label, i]));
  const pins: Group[] = [];
  for (const probe of probes) {
    const i = byYear.get(probe.year_label);
    if (i === undefined) {
      throw new ManifestError(`probe year '${probe.year_label}' has no slot`);
    }
    const pin = probePin(probe.x, probe.y, spans[i].base, spans[i].height);
    root.add(pin);
    pins.push(pin);
  }

  return {
    root,
    slotGroups,
    labels,
    separators,
    pins,
    home: homeFromBounds(manifest.bounds.min, manifest.bounds.max),
  };
}

/** Year labels in rendered stacking order (lowest base z first). */
export function bottomToTopYears(manifest: SceneManifest): string[] {
  return manifest.slots
    .map((s) => ({ year: s.year_label, z: s.translation[2] }))
    .sort((a, b) => a.z - b.z)
    .map((s) => s.year);
}
