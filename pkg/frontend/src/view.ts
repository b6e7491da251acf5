// Browser-side rendering: a full-viewport canvas, the restricted camera,
// and a ready callback fired on the first frame drawn with all meshes in
// place. Kept separate from scene.ts so scene-graph logic stays testable
// without WebGL.

import {
  AmbientLight,
  DirectionalLight,
  Scene,
  WebGLRenderer,
} from "three";

import { CameraInput, RestrictedOrbitCamera } from "./camera.js";
import { SceneGraph } from "./scene.js";

export class SceneView {
  readonly cam: RestrictedOrbitCamera;
  private readonly renderer: WebGLRenderer;
  private readonly scene: Scene;
  private firstFrameDone = false;

  constructor(
    container: HTMLElement,
    graph: SceneGraph,
    private readonly onReady: () => void,
  ) {
    this.scene = new Scene();
    this.scene.add(graph.root);
    this.scene.add(new AmbientLight(0xffffff, 0.7));
    const sun = new DirectionalLight(0xffffff, 1.2);
    sun.position.set(1, -1, 2);
    this.scene.add(sun);

    this.cam = new RestrictedOrbitCamera(
      graph.home,
      container.clientWidth / Math.max(1, container.clientHeight),
    );

    this.renderer = new WebGLRenderer({ antialias: true });
    this.renderer.setSize(container.clientWidth, container.clientHeight);
    this.renderer.setClearColor(0xf5f5f5);
    container.appendChild(this.renderer.domElement);

    new CameraInput(this.cam).attach(this.renderer.domElement);
    window.addEventListener("resize", () => {
      this.renderer.setSize(container.clientWidth, container.clientHeight);
      this.cam.setAspect(container.clientWidth / Math.max(1, container.clientHeight));
    });

    this.renderer.setAnimationLoop(() => this.frame());
  }

  private frame(): void {
    this.renderer.render(this.scene, this.cam.camera);
    if (!this.firstFrameDone) {
      this.firstFrameDone = true;
      this.onReady();
    }
  }

  resetCamera(): void {
    this.cam.reset();
  }

  dispose(): void {
    this.renderer.setAnimationLoop(null);
    this.renderer.dispose();
    this.renderer.domElement.remove();
  }
}
