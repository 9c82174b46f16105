// Console wiring: stream -> views, input box -> /api/command.

import { endpointXyz, Geometry } from "./fk.js";
import { CommandOutcome, TickEvent } from "./protocol.js";
import { StreamClient } from "./stream.js";
import { CommandHistory, submitCommand, TranscriptModel } from "./transcript.js";
import {
  gaugeFraction,
  gaugeLabel,
  gripperDirection,
  gripperOpening,
  sideViewPoints,
  topViewPoints,
} from "./views.js";

const JOINT_LABELS = ["base", "shoulder", "elbow", "wrist bend", "wrist rotate", "gripper"];

let geometry: Geometry = { l1: 100, l2: 100 };
let connected = false;
let lastTick: TickEvent | null = null;

const transcript = new TranscriptModel();
const history = new CommandHistory();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function drawSide(tick: TickEvent): void {
  const canvas = el<HTMLCanvasElement>("side-view");
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const origin = { x: 40, y: canvas.height - 40 };
  const [, theta2, theta3, theta4, , gripper] = tick.joints;
  const pts = sideViewPoints(geometry, theta2, theta3, origin);

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(0, origin.y);
  ctx.lineTo(canvas.width, origin.y);
  ctx.stroke();

  ctx.strokeStyle = "#09f";
  ctx.lineWidth = 4;
  ctx.beginPath();
  ctx.moveTo(pts.shoulder.x, pts.shoulder.y);
  ctx.lineTo(pts.elbow.x, pts.elbow.y);
  ctx.lineTo(pts.wrist.x, pts.wrist.y);
  ctx.stroke();

  // gripper glyph: two jaws along the wrist-bend direction, gap = jaw angle
  const open = gripperOpening(gripper);
  const dir = gripperDirection(theta2, theta3, theta4);
  const ux = Math.cos(dir);
  const uy = -Math.sin(dir); // canvas y grows down
  const nx = -uy;
  const ny = ux;
  ctx.strokeStyle = "#f60";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(pts.wrist.x + nx * open, pts.wrist.y + ny * open);
  ctx.lineTo(pts.wrist.x + nx * open + ux * 14, pts.wrist.y + ny * open + uy * 14);
  ctx.moveTo(pts.wrist.x - nx * open, pts.wrist.y - ny * open);
  ctx.lineTo(pts.wrist.x - nx * open + ux * 14, pts.wrist.y - ny * open + uy * 14);
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawTop(tick: TickEvent): void {
  const canvas = el<HTMLCanvasElement>("top-view");
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const origin = { x: canvas.width / 2, y: canvas.height - 20 };
  const [theta1, theta2, theta3] = tick.joints;
  const view = topViewPoints(geometry, theta1, theta2, theta3, origin);

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.arc(origin.x, origin.y, geometry.l1 + geometry.l2, Math.PI, 2 * Math.PI);
  ctx.stroke();

  ctx.strokeStyle = "#09f";
  ctx.lineWidth = 4;
  ctx.beginPath();
  ctx.moveTo(view.base.x, view.base.y);
  ctx.lineTo(view.hand.x, view.hand.y);
  ctx.stroke();
  ctx.lineWidth = 1;
}

function renderGauges(tick: TickEvent): void {
  const container = el<HTMLDivElement>("gauges");
  container.innerHTML = "";
  tick.registers.forEach((width, i) => {
    const row = document.createElement("div");
    row.className = "gauge-row";
    const name = document.createElement("span");
    name.className = "gauge-name";
    name.textContent = JOINT_LABELS[i];
    const bar = document.createElement("div");
    bar.className = "gauge-bar";
    const fill = document.createElement("div");
    fill.className = "gauge-fill";
    fill.style.width = `${gaugeFraction(width) * 100}%`;
    bar.appendChild(fill);
    const label = document.createElement("span");
    label.className = "gauge-label";
    label.textContent = gaugeLabel(width);
    row.append(name, bar, label);
    container.appendChild(row);
  });
}

function renderState(tick: TickEvent): void {
  lastTick = tick;
  drawSide(tick);
  drawTop(tick);
  renderGauges(tick);
  const pos = endpointXyz(geometry, tick.joints);
  el("endpoint").textContent =
    `endpoint x=${pos.x.toFixed(1)} y=${pos.y.toFixed(1)} z=${pos.z.toFixed(1)} mm` +
    (tick.active_command ? ` | running: ${tick.active_command}` : "");
}

function renderTranscript(): void {
  const list = el<HTMLUListElement>("transcript");
  list.innerHTML = "";
  for (const [user, response] of transcript.pairs()) {
    const li = document.createElement("li");
    li.textContent = `you> ${user}`;
    list.appendChild(li);
    const reply = document.createElement("li");
    reply.className = "arm-line";
    reply.textContent = `arm> ${response ?? "..."}`;
    list.appendChild(reply);
  }
  list.scrollTop = list.scrollHeight;
}

function setConnected(up: boolean): void {
  connected = up;
  const badge = el("status");
  badge.textContent = up ? "connected" : "disconnected";
  badge.className = up ? "status-up" : "status-down";
  el<HTMLInputElement>("command-input").disabled = !up;
}

async function postCommand(text: string): Promise<CommandOutcome> {
  const resp = await fetch("/api/command", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
  if (!resp.ok) throw new Error(`HTTP ${resp.status}`);
  return (await resp.json()) as CommandOutcome;
}

async function onSubmit(): Promise<void> {
  const input = el<HTMLInputElement>("command-input");
  const text = input.value.trim();
  if (!text) return;
  const banner = el("banner");
  banner.textContent = "";
  const result = await submitCommand(transcript, postCommand, text, connected);
  if (!result.accepted && result.error) {
    banner.textContent = result.error;
  } else {
    history.push(text);
    input.value = "";
  }
  renderTranscript();
}

async function boot(): Promise<void> {
  try {
    const cfg = await (await fetch("/api/config")).json();
    geometry = cfg.geometry;
  } catch {
    // defaults stand until the server answers
  }
  el<HTMLFormElement>("command-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void onSubmit();
  });
  const input = el<HTMLInputElement>("command-input");
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "ArrowUp") {
      const prev = history.previous();
      if (prev !== null) input.value = prev;
      ev.preventDefault();
    } else if (ev.key === "ArrowDown") {
      input.value = history.next() ?? "";
      ev.preventDefault();
    }
  });

  const proto = location.protocol === "https:" ? "wss" : "ws";
  const stream = new StreamClient(`${proto}://${location.host}/api/stream`, {
    onTick: renderState,
    onStatus: setConnected,
  });
  stream.connect();
  renderTranscript();
}

void boot();
