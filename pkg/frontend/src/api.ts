// Thin typed client for the replay service. All errors surface as ApiError
// with the service's own detail string when one is available.

import type { DatasetSummary, FramesListing, FrameView } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(detail, response.status);
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as T;
}

export function frameViewUrl(datasetId: string, timestamp: number, rangeM: number): string {
  const base = `/api/datasets/${encodeURIComponent(datasetId)}/frames/${timestamp}`;
  return `${base}?range_m=${encodeURIComponent(rangeM)}`;
}

export async function uploadDataset(content: Blob | string): Promise<DatasetSummary> {
  let response: Response;
  try {
    response = await fetch("/api/datasets", { method: "POST", body: content });
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as DatasetSummary;
}

export async function generateDataset(
  vehiclesPerFrame: number,
  seed: number,
  maxFileKb: number,
): Promise<DatasetSummary> {
  let response: Response;
  try {
    response = await fetch("/api/generate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        vehicles_per_frame: vehiclesPerFrame,
        seed,
        max_file_kb: maxFileKb,
      }),
    });
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as DatasetSummary;
}

export function listDatasets(): Promise<DatasetSummary[]> {
  return getJson<DatasetSummary[]>("/api/datasets");
}

export function listFrames(datasetId: string): Promise<FramesListing> {
  return getJson<FramesListing>(`/api/datasets/${encodeURIComponent(datasetId)}/frames`);
}

export function fetchFrameView(
  datasetId: string,
  timestamp: number,
  rangeM: number,
): Promise<FrameView> {
  return getJson<FrameView>(frameViewUrl(datasetId, timestamp, rangeM));
}
