// Wires the socket, the canvas, and the input machine together.  The server
// is the single authority: this file never simulates, it only displays the
// frames it was sent and forwards user intent.

import { canvasToWorld, fit, makeCamera, pan, zoom, type Camera } from "./camera.js";
import { HEADING_STEP, ShillInput, type ControlSource } from "./input.js";
import {
  parseServerFrame,
  PROTOCOL_VERSION,
  type StateFrame,
} from "./protocol.js";
import { drawDial, drawScene, drawSparkline } from "./render.js";
import { RingBuffer } from "./ring.js";

const SPARKLINE_CAPACITY = 240;

export interface AppElements {
  scene: HTMLCanvasElement;
  sparkline: HTMLCanvasElement;
  dial: HTMLCanvasElement;
  banner: HTMLElement;
  status: HTMLElement;
  hint: HTMLElement;
  connectButton: HTMLButtonElement;
  runButton: HTMLButtonElement;
  pauseButton: HTMLButtonElement;
  stepButton: HTMLButtonElement;
  autopilotToggle: HTMLInputElement;
  betaInput: HTMLInputElement;
  agentCount: HTMLInputElement;
  seed: HTMLInputElement;
}

export class App {
  private socket: WebSocket | null = null;
  private camera: Camera;
  private latest: StateFrame | null = null;
  private needsFit = true;
  private history = new RingBuffer(SPARKLINE_CAPACITY);
  private input = new ShillInput();
  private controlSource: ControlSource = "manual";
  private synced: number | null = null;
  private dragging = false;
  private panning = false;
  private lastPointer: { x: number; y: number } | null = null;

  constructor(private readonly el: AppElements) {
    this.camera = makeCamera(el.scene.width, el.scene.height);
    this.bindControls();
    this.bindCanvas();
    requestAnimationFrame(() => this.frameLoop());
  }

  // ------------------------------------------------------------------ socket

  connect(): void {
    this.socket?.close();
    const proto = location.protocol === "https:" ? "wss" : "ws";
    const socket = new WebSocket(`${proto}://${location.host}/ws`);
    this.socket = socket;
    this.setBanner("connecting…");
    socket.onopen = () => {
      this.setBanner(null);
      this.history.clear();
      this.synced = null;
      this.needsFit = true;
      this.controlSource = "manual";
      this.send({
        v: PROTOCOL_VERSION,
        type: "init",
        config: {
          scenario: {
            kind: "random_section3",
            n: Number(this.el.agentCount.value) || 20,
            seed: Number(this.el.seed.value) || 1,
            v: 0.03,
            r: 1.0,
          },
          control: { mode: "manual" },
          sync_tolerance: 1e-3,
        },
      });
    };
    socket.onclose = () => this.setBanner("disconnected");
    socket.onerror = () => this.setBanner("connection error");
    socket.onmessage = (event) => this.onFrame(String(event.data));
  }

  private send(message: unknown): void {
    if (this.socket?.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(message));
    }
  }

  private onFrame(raw: string): void {
    const frame = parseServerFrame(raw);
    if (frame === null) {
      this.setBanner(`unsupported frame (speaking protocol v${PROTOCOL_VERSION})`);
      return;
    }
    switch (frame.type) {
      case "state":
        this.latest = frame;
        this.history.push(frame.delta);
        this.input.syncFrom(frame.shill);
        break;
      case "ack":
        if (frame.of === "init" && frame.state) {
          this.latest = frame.state;
          this.history.push(frame.state.delta);
          this.needsFit = true;
        }
        if (frame.of === "autopilot" && frame.control_source) {
          this.controlSource = frame.control_source as ControlSource;
        }
        break;
      case "sync":
        this.synced = frame.tick;
        break;
      case "error":
        this.flashHint(`${frame.code}${frame.detail ? `: ${frame.detail}` : ""}`);
        break;
    }
  }

  // ------------------------------------------------------------------ render

  private frameLoop(): void {
    const ctx = this.el.scene.getContext("2d");
    if (ctx && this.latest) {
      if (this.needsFit) {
        const points = this.latest.agents.map((a) => ({ x: a.x, y: a.y }));
        this.camera = fit(this.camera, points);
        this.needsFit = false;
      }
      drawScene(ctx, this.latest, this.camera);
    }
    const spark = this.el.sparkline.getContext("2d");
    if (spark) {
      drawSparkline(spark, this.history, this.el.sparkline.width, this.el.sparkline.height);
    }
    const dial = this.el.dial.getContext("2d");
    if (dial) drawDial(dial, this.input.headingRad, this.el.dial.width);
    this.updateStatus();

    // at most one shill command per animation frame
    const message = this.input.drain(this.controlSource, this.latest?.shill ?? null);
    if (message !== null) this.send(message);
    if (this.input.takeBlockedHint()) {
      this.flashHint(
        this.controlSource === "ubeta" ? "autopilot is steering" : "session has no shill",
      );
    }
    requestAnimationFrame(() => this.frameLoop());
  }

  private updateStatus(): void {
    const parts: string[] = [];
    if (this.latest) {
      parts.push(`tick ${this.latest.tick}`);
      parts.push(
        this.latest.delta === null ? "Δ n/a" : `Δ ${this.latest.delta.toFixed(5)}`,
      );
    }
    parts.push(`control: ${this.controlSource}`);
    if (this.synced !== null) parts.push(`synchronized at tick ${this.synced}`);
    this.el.status.textContent = parts.join(" · ");
  }

  private setBanner(text: string | null): void {
    this.el.banner.textContent = text ?? "";
    this.el.banner.style.display = text === null ? "none" : "block";
  }

  private flashHint(text: string): void {
    this.el.hint.textContent = text;
    this.el.hint.style.opacity = "1";
    setTimeout(() => {
      this.el.hint.style.opacity = "0";
    }, 1200);
  }

  // ------------------------------------------------------------------ input

  private bindControls(): void {
    this.el.connectButton.onclick = () => this.connect();
    this.el.runButton.onclick = () =>
      this.send({ v: PROTOCOL_VERSION, type: "set_mode", mode: "running", tick_rate: 20 });
    this.el.pauseButton.onclick = () =>
      this.send({ v: PROTOCOL_VERSION, type: "set_mode", mode: "paused" });
    this.el.stepButton.onclick = () =>
      this.send({ v: PROTOCOL_VERSION, type: "step", count: 1 });
    this.el.autopilotToggle.onchange = () => {
      const on = this.el.autopilotToggle.checked;
      const beta = Number(this.el.betaInput.value) || Math.PI / 2;
      this.send({ v: PROTOCOL_VERSION, type: "autopilot", on, ...(on ? { beta } : {}) });
    };
    window.addEventListener("keydown", (event) => {
      if (event.key === "ArrowLeft") this.input.turn(1);
      else if (event.key === "ArrowRight") this.input.turn(-1);
    });
  }

  private bindCanvas(): void {
    const scene = this.el.scene;
    scene.addEventListener("mousedown", (event) => {
      if (event.button === 0 && !event.shiftKey) {
        this.dragging = true;
        this.pointShill(event);
      } else {
        this.panning = true;
        this.lastPointer = { x: event.offsetX, y: event.offsetY };
      }
    });
    scene.addEventListener("mousemove", (event) => {
      if (this.dragging) this.pointShill(event);
      if (this.panning && this.lastPointer) {
        this.camera = pan(
          this.camera,
          event.offsetX - this.lastPointer.x,
          event.offsetY - this.lastPointer.y,
        );
        this.lastPointer = { x: event.offsetX, y: event.offsetY };
      }
    });
    window.addEventListener("mouseup", () => {
      this.dragging = false;
      this.panning = false;
      this.lastPointer = null;
    });
    scene.addEventListener("contextmenu", (event) => event.preventDefault());
    scene.addEventListener("wheel", (event) => {
      event.preventDefault();
      if (event.ctrlKey) {
        this.camera = zoom(
          this.camera,
          event.deltaY < 0 ? 1.15 : 1 / 1.15,
          event.offsetX,
          event.offsetY,
        );
      } else {
        // one 5-degree dial step per wheel notch
        this.input.turn(event.deltaY < 0 ? 1 : -1);
      }
    });
    this.el.dial.addEventListener("mousedown", (event) => {
      const c = this.el.dial.width / 2;
      this.input.setHeading(Math.atan2(-(event.offsetY - c), event.offsetX - c));
    });
  }

  private pointShill(event: MouseEvent): void {
    const world = canvasToWorld(this.camera, event.offsetX, event.offsetY);
    this.input.pointTo(world.x, world.y);
  }
}

export { HEADING_STEP };
