// Self-contained canvas map: an equirectangular local projection with a
// degree graticule, drag panning, and wheel zoom. No tile server and no
// network fetches; the only inputs are the frame views themselves.

import { pinStyle } from "./state.js";
import type { FrameView } from "./types.js";

const METERS_PER_DEG_LAT = 111194.93; // 2piR/360 at R = 6371008.8 m
const PIN_RADIUS_PX = 11;
const MIN_METERS_PER_PX = 0.05;
const MAX_METERS_PER_PX = 5000;

export class MapRenderer {
  private readonly ctx: CanvasRenderingContext2D;
  private centerLat = 42.29;
  private centerLon = -83.67;
  private metersPerPx = 40;
  private lastView: FrameView | null = null;
  private dragFrom: { x: number; y: number } | null = null;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;

    canvas.addEventListener("pointerdown", (e) => {
      this.dragFrom = { x: e.clientX, y: e.clientY };
      canvas.setPointerCapture(e.pointerId);
    });
    canvas.addEventListener("pointermove", (e) => {
      if (!this.dragFrom) return;
      const dx = e.clientX - this.dragFrom.x;
      const dy = e.clientY - this.dragFrom.y;
      this.dragFrom = { x: e.clientX, y: e.clientY };
      this.centerLon -= (dx * this.metersPerPx) / this.metersPerDegLon();
      this.centerLat += (dy * this.metersPerPx) / METERS_PER_DEG_LAT;
      this.redraw();
    });
    const endDrag = () => {
      this.dragFrom = null;
    };
    canvas.addEventListener("pointerup", endDrag);
    canvas.addEventListener("pointercancel", endDrag);
    canvas.addEventListener(
      "wheel",
      (e) => {
        e.preventDefault();
        const factor = e.deltaY > 0 ? 1.2 : 1 / 1.2;
        const next = this.metersPerPx * factor;
        this.metersPerPx = Math.min(Math.max(next, MIN_METERS_PER_PX), MAX_METERS_PER_PX);
        this.redraw();
      },
      { passive: false },
    );
  }

  private metersPerDegLon(): number {
    return METERS_PER_DEG_LAT * Math.cos((this.centerLat * Math.PI) / 180);
  }

  fitBounds(view: FrameView): void {
    if (view.vehicles.length === 0) return;
    const lats = view.vehicles.map((v) => v.latitude);
    const lons = view.vehicles.map((v) => v.longitude);
    const latMin = Math.min(...lats);
    const latMax = Math.max(...lats);
    const lonMin = Math.min(...lons);
    const lonMax = Math.max(...lons);
    this.centerLat = (latMin + latMax) / 2;
    this.centerLon = (lonMin + lonMax) / 2;

    const heightM = Math.max((latMax - latMin) * METERS_PER_DEG_LAT, 500);
    const widthM = Math.max((lonMax - lonMin) * this.metersPerDegLon(), 500);
    const { width, height } = this.cssSize();
    const pad = 1.25;
    this.metersPerPx = Math.min(
      Math.max((pad * Math.max(widthM / width, heightM / height)), MIN_METERS_PER_PX),
      MAX_METERS_PER_PX,
    );
  }

  render(view: FrameView): void {
    this.lastView = view;
    this.redraw();
  }

  renderPlaceholder(message: string): void {
    this.lastView = null;
    const { width, height } = this.prepare();
    this.ctx.fillStyle = "#667";
    this.ctx.font = "16px system-ui, sans-serif";
    this.ctx.textAlign = "center";
    this.ctx.textBaseline = "middle";
    this.ctx.fillText(message, width / 2, height / 2);
  }

  private cssSize(): { width: number; height: number } {
    return {
      width: this.canvas.clientWidth || 800,
      height: this.canvas.clientHeight || 520,
    };
  }

  private prepare(): { width: number; height: number } {
    const { width, height } = this.cssSize();
    const dpr = window.devicePixelRatio || 1;
    if (this.canvas.width !== width * dpr || this.canvas.height !== height * dpr) {
      this.canvas.width = width * dpr;
      this.canvas.height = height * dpr;
    }
    this.ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
    this.ctx.fillStyle = "#f2f4f0";
    this.ctx.fillRect(0, 0, width, height);
    return { width, height };
  }

  private project(lat: number, lon: number, width: number, height: number): [number, number] {
    const x = width / 2 + ((lon - this.centerLon) * this.metersPerDegLon()) / this.metersPerPx;
    const y = height / 2 - ((lat - this.centerLat) * METERS_PER_DEG_LAT) / this.metersPerPx;
    return [x, y];
  }

  private redraw(): void {
    const { width, height } = this.prepare();
    this.drawGraticule(width, height);
    this.drawScaleBar(width, height);
    if (!this.lastView) return;

    const ctx = this.ctx;
    ctx.font = `bold ${PIN_RADIUS_PX}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    for (const vehicle of this.lastView.vehicles) {
      const [x, y] = this.project(vehicle.latitude, vehicle.longitude, width, height);
      if (x < -20 || y < -20 || x > width + 20 || y > height + 20) continue;
      const style = pinStyle(vehicle);
      ctx.beginPath();
      ctx.arc(x, y, PIN_RADIUS_PX, 0, Math.PI * 2);
      ctx.fillStyle = style.fill;
      ctx.fill();
      ctx.lineWidth = 1.5;
      ctx.strokeStyle = "rgba(0,0,0,0.45)";
      ctx.stroke();
      ctx.fillStyle = "#fff";
      ctx.fillText(style.glyph, x, y + 0.5);
    }
  }

  private drawGraticule(width: number, height: number): void {
    const ctx = this.ctx;
    // pick a degree step giving grid lines roughly every 120 px
    const targetDeg = (120 * this.metersPerPx) / METERS_PER_DEG_LAT;
    const steps = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5];
    const step = steps.find((s) => s >= targetDeg) ?? 5;

    const latHalf = (height / 2) * (this.metersPerPx / METERS_PER_DEG_LAT);
    const lonHalf = (width / 2) * (this.metersPerPx / this.metersPerDegLon());
    ctx.strokeStyle = "rgba(70, 90, 110, 0.18)";
    ctx.fillStyle = "rgba(70, 90, 110, 0.6)";
    ctx.lineWidth = 1;
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "left";
    ctx.textBaseline = "top";

    const latStart = Math.ceil((this.centerLat - latHalf) / step) * step;
    for (let lat = latStart; lat <= this.centerLat + latHalf; lat += step) {
      const [, y] = this.project(lat, this.centerLon, width, height);
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(width, y);
      ctx.stroke();
      ctx.fillText(lat.toFixed(3), 4, y + 2);
    }
    const lonStart = Math.ceil((this.centerLon - lonHalf) / step) * step;
    for (let lon = lonStart; lon <= this.centerLon + lonHalf; lon += step) {
      const [x] = this.project(this.centerLat, lon, width, height);
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, height);
      ctx.stroke();
      ctx.fillText(lon.toFixed(3), x + 3, 4);
    }
  }

  private drawScaleBar(width: number, height: number): void {
    const ctx = this.ctx;
    const targetM = 100 * this.metersPerPx;
    const niceValues = [10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000];
    const meters = niceValues.find((v) => v >= targetM) ?? 50000;
    const px = meters / this.metersPerPx;
    const x0 = width - px - 16;
    const y0 = height - 18;
    ctx.strokeStyle = "#334";
    ctx.fillStyle = "#334";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x0 + px, y0);
    ctx.stroke();
    ctx.font = "11px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "bottom";
    ctx.fillText(meters >= 1000 ? `${meters / 1000} km` : `${meters} m`, x0 + px / 2, y0 - 3);
  }
}
