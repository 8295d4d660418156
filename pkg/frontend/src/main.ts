import { App, type AppElements } from "./app.js";

function grab<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

window.addEventListener("load", () => {
  const elements: AppElements = {
    scene: grab<HTMLCanvasElement>("scene"),
    sparkline: grab<HTMLCanvasElement>("sparkline"),
    dial: grab<HTMLCanvasElement>("dial"),
    banner: grab("banner"),
    status: grab("status"),
    hint: grab("hint"),
    connectButton: grab<HTMLButtonElement>("connect"),
    runButton: grab<HTMLButtonElement>("run"),
    pauseButton: grab<HTMLButtonElement>("pause"),
    stepButton: grab<HTMLButtonElement>("step"),
    autopilotToggle: grab<HTMLInputElement>("autopilot"),
    betaInput: grab<HTMLInputElement>("beta"),
    agentCount: grab<HTMLInputElement>("agents"),
    seed: grab<HTMLInputElement>("seed"),
  };
  const app = new App(elements);
  app.connect();
});
