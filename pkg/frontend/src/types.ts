// Wire types mirroring the service's JSON payloads.

export interface DatasetSummary {
  dataset_id: string;
  source_name: string;
  frame_count: number;
  record_count: number;
  warnings: string[];
}

export interface FramesListing {
  dataset_id: string;
  timestamps: number[];
}

export interface VehicleView {
  vehicle_id: string;
  latitude: number;
  longitude: number;
  speed: number;
  partition_index: number;
  color_index: number;
  character: string;
}

export interface FrameView {
  timestamp: number;
  range_m: number;
  partition_count: number;
  squarings: number;
  distance_ms: number;
  closure_ms: number;
  vehicles: VehicleView[];
}

export interface RenderLogEntry {
  frame_index: number;
  timestamp: number;
  vehicle_count: number;
  range_m: number;
  render_ms: number;
}
