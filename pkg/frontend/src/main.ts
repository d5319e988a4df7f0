import {
  fetchFrameView,
  generateDataset,
  listDatasets,
  listFrames,
  uploadDataset,
} from "./api.js";
import { MapRenderer } from "./map.js";
import {
  FetchSequencer,
  FrameFetchQueue,
  advanceFrame,
  clampFrameIndex,
  clampRangeM,
  clampTickMs,
  initialState,
  meanRenderMs,
  renderLogToCsv,
  type FrameRequest,
} from "./state.js";
import type { DatasetSummary } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const fileInput = el<HTMLInputElement>("file-input");
const generateN = el<HTMLInputElement>("generate-n");
const generateSeed = el<HTMLInputElement>("generate-seed");
const generateKb = el<HTMLInputElement>("generate-kb");
const generateBtn = el<HTMLButtonElement>("generate-btn");
const datasetSelect = el<HTMLSelectElement>("dataset-select");
const canvas = el<HTMLCanvasElement>("map-canvas");
const playBtn = el<HTMLButtonElement>("play-btn");
const stepBack = el<HTMLButtonElement>("step-back");
const stepForward = el<HTMLButtonElement>("step-forward");
const frameSlider = el<HTMLInputElement>("frame-slider");
const frameLabel = el<HTMLSpanElement>("frame-label");
const tickInput = el<HTMLInputElement>("tick-input");
const rangeSlider = el<HTMLInputElement>("range-slider");
const rangeLabel = el<HTMLSpanElement>("range-label");
const legend = el<HTMLDivElement>("legend");
const banner = el<HTMLDivElement>("error-banner");
const exportBtn = el<HTMLButtonElement>("export-btn");

const state = initialState();
const map = new MapRenderer(canvas);
const sequencer = new FetchSequencer();
let playTimer: number | null = null;
let needsFit = true;

function showError(message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

function clearError(): void {
  banner.hidden = true;
}

function setControlsEnabled(enabled: boolean): void {
  for (const control of [playBtn, stepBack, stepForward, frameSlider, exportBtn]) {
    control.toggleAttribute("disabled", !enabled);
  }
}

function stopPlayback(): void {
  state.playing = false;
  if (playTimer !== null) {
    window.clearInterval(playTimer);
    playTimer = null;
  }
  playBtn.textContent = "Play";
}

function updateLegend(): void {
  const view = state.lastView;
  if (!view) {
    legend.textContent = "no frame loaded";
    return;
  }
  const mean = meanRenderMs(state.renderLog);
  legend.innerHTML = [
    `t=<b>${view.timestamp}</b>`,
    `vehicles <b>${view.vehicles.length}</b>`,
    `partitions <b>${view.partition_count}</b>`,
    `squarings <b>${view.squarings}</b>`,
    `range <b>${view.range_m} m</b>`,
    `render <b>${mean.toFixed(1)} ms avg</b>`,
  ].join(" &middot; ");
}

function updateFrameLabel(): void {
  const total = state.timestamps.length;
  if (total === 0) {
    frameLabel.textContent = "no frames";
    return;
  }
  const t = state.timestamps[state.frameIndex];
  frameLabel.textContent = `frame ${state.frameIndex + 1}/${total} (t=${t})`;
}

const queue = new FrameFetchQueue(async (req: FrameRequest) => {
  const seq = sequencer.begin();
  try {
    const view = await fetchFrameView(req.datasetId, req.timestamp, req.rangeM);
    if (!sequencer.isCurrent(seq)) return; // superseded while in flight
    if (needsFit) {
      map.fitBounds(view);
      needsFit = false;
    }
    const start = performance.now();
    map.render(view);
    const renderMs = performance.now() - start;
    state.lastView = view;
    state.renderLog.push({
      frame_index: req.frameIndex,
      timestamp: view.timestamp,
      vehicle_count: view.vehicles.length,
      range_m: view.range_m,
      render_ms: renderMs,
    });
    clearError();
    updateLegend();
  } catch (err) {
    stopPlayback();
    showError(err instanceof Error ? err.message : String(err));
  }
});

function requestCurrentFrame(): void {
  if (!state.datasetId || state.timestamps.length === 0) return;
  queue.request({
    datasetId: state.datasetId,
    timestamp: state.timestamps[state.frameIndex],
    rangeM: state.rangeM,
    frameIndex: state.frameIndex,
  });
}

function goToFrame(index: number): void {
  state.frameIndex = clampFrameIndex(index, state.timestamps.length);
  frameSlider.value = String(state.frameIndex);
  updateFrameLabel();
  requestCurrentFrame();
}

async function loadDataset(datasetId: string): Promise<void> {
  try {
    const listing = await listFrames(datasetId);
    state.datasetId = datasetId;
    state.timestamps = listing.timestamps;
    state.renderLog = [];
    needsFit = true;
    stopPlayback();
    frameSlider.max = String(Math.max(state.timestamps.length - 1, 0));
    setControlsEnabled(state.timestamps.length > 0);
    datasetSelect.value = datasetId;
    goToFrame(0);
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
  }
}

async function refreshDatasetList(selected?: string): Promise<void> {
  let datasets: DatasetSummary[];
  try {
    datasets = await listDatasets();
  } catch {
    return; // leave the picker as is; a later action will surface the error
  }
  datasetSelect.innerHTML = "";
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = datasets.length ? "pick a dataset" : "no datasets yet";
  datasetSelect.append(placeholder);
  for (const d of datasets) {
    const option = document.createElement("option");
    option.value = d.dataset_id;
    option.textContent = `${d.source_name} (${d.frame_count} frames)`;
    datasetSelect.append(option);
  }
  if (selected) datasetSelect.value = selected;
}

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  try {
    const summary = await uploadDataset(file);
    await refreshDatasetList(summary.dataset_id);
    await loadDataset(summary.dataset_id);
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
  } finally {
    fileInput.value = "";
  }
});

generateBtn.addEventListener("click", async () => {
  const n = Number(generateN.value);
  const seed = Number(generateSeed.value) || 0;
  const kb = Number(generateKb.value) || 200;
  if (!Number.isInteger(n) || n < 1) {
    showError("vehicles per frame must be a positive integer");
    return;
  }
  generateBtn.disabled = true;
  try {
    const summary = await generateDataset(n, seed, kb);
    await refreshDatasetList(summary.dataset_id);
    await loadDataset(summary.dataset_id);
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
  } finally {
    generateBtn.disabled = false;
  }
});

datasetSelect.addEventListener("change", () => {
  if (datasetSelect.value) void loadDataset(datasetSelect.value);
});

frameSlider.addEventListener("input", () => {
  stopPlayback();
  goToFrame(Number(frameSlider.value));
});

stepBack.addEventListener("click", () => {
  stopPlayback();
  goToFrame(state.frameIndex - 1);
});

stepForward.addEventListener("click", () => {
  stopPlayback();
  goToFrame(state.frameIndex + 1);
});

function startPlayback(): void {
  if (state.timestamps.length === 0) return;
  // restarting from the last frame wraps to the beginning
  if (state.frameIndex >= state.timestamps.length - 1) {
    goToFrame(0);
  }
  state.playing = true;
  playBtn.textContent = "Pause";
  playTimer = window.setInterval(() => {
    const step = advanceFrame(state.frameIndex, state.timestamps.length);
    goToFrame(step.frameIndex);
    if (!step.playing) stopPlayback();
  }, state.tickMs);
}

playBtn.addEventListener("click", () => {
  if (state.playing) {
    stopPlayback();
  } else {
    startPlayback();
  }
});

tickInput.addEventListener("change", () => {
  state.tickMs = clampTickMs(Number(tickInput.value));
  tickInput.value = String(state.tickMs);
  if (state.playing) {
    stopPlayback();
    startPlayback();
  }
});

rangeSlider.addEventListener("input", () => {
  state.rangeM = clampRangeM(Number(rangeSlider.value));
  rangeLabel.textContent = `${state.rangeM} m`;
  requestCurrentFrame();
});

exportBtn.addEventListener("click", () => {
  const blob = new Blob([renderLogToCsv(state.renderLog)], { type: "text/csv" });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = "render-log.csv";
  link.click();
  URL.revokeObjectURL(url);
});

setControlsEnabled(false);
map.renderPlaceholder("no data - upload a CSV or generate a dataset");
updateLegend();
updateFrameLabel();
rangeLabel.textContent = `${state.rangeM} m`;
tickInput.value = String(state.tickMs);
void refreshDatasetList();
