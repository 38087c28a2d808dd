/**
 * Software canvas: RGBA buffer with lines, rectangles, bitmap text, and a
 * small perceptual colormap for heatmaps.
 */
import { GLYPH_H, GLYPH_W, glyph } from "./font";

export type Color = [number, number, number, number];

export const BLACK: Color = [0, 0, 0, 255];
export const WHITE: Color = [255, 255, 255, 255];
export const GREY: Color = [200, 200, 200, 255];
export const PALETTE: Color[] = [
  [31, 119, 180, 255],
  [214, 39, 40, 255],
  [44, 160, 44, 255],
  [148, 103, 189, 255],
  [255, 127, 14, 255],
  [23, 190, 207, 255],
];

// viridis anchors, dark to bright
const VIRIDIS: Array<[number, number, number]> = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(t: number): Color {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(pos));
  const frac = pos - i;
  const a = VIRIDIS[i];
  const b = VIRIDIS[i + 1];
  return [
    Math.round(a[0] + frac * (b[0] - a[0])),
    Math.round(a[1] + frac * (b[1] - a[1])),
    Math.round(a[2] + frac * (b[2] - a[2])),
    255,
  ];
}

export class Raster {
  readonly data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4);
    this.fillRect(0, 0, width, height, WHITE);
  }

  set(x: number, y: number, c: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = c[0];
    this.data[i + 1] = c[1];
    this.data[i + 2] = c[2];
    this.data[i + 3] = c[3];
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    const x1 = Math.max(0, Math.round(x));
    const y1 = Math.max(0, Math.round(y));
    const x2 = Math.min(this.width, Math.round(x + w));
    const y2 = Math.min(this.height, Math.round(y + h));
    for (let yy = y1; yy < y2; yy++) {
      for (let xx = x1; xx < x2; xx++) {
        this.set(xx, yy, c);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, c: Color): void {
    // DDA; good enough for axis-aligned plots
    const dx = x1 - x0;
    const dy = y1 - y0;
    const steps = Math.max(Math.abs(dx), Math.abs(dy), 1);
    for (let i = 0; i <= steps; i++) {
      this.set(Math.round(x0 + (dx * i) / steps), Math.round(y0 + (dy * i) / steps), c);
    }
  }

  polyline(xs: number[], ys: number[], c: Color): void {
    for (let i = 1; i < xs.length; i++) {
      this.line(xs[i - 1], ys[i - 1], xs[i], ys[i], c);
    }
  }

  marker(x: number, y: number, c: Color): void {
    this.fillRect(x - 1, y - 1, 3, 3, c);
  }

  text(x: number, y: number, s: string, c: Color = BLACK): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of s) {
      const rows = glyph(ch);
      for (let r = 0; r < GLYPH_H; r++) {
        for (let col = 0; col < GLYPH_W; col++) {
          if (rows[r][col] === "#") this.set(cx + col, cy + r, c);
        }
      }
      cx += GLYPH_W + 1;
    }
  }

  textWidth(s: string): number {
    return s.length * (GLYPH_W + 1) - 1;
  }

  textRight(x: number, y: number, s: string, c: Color = BLACK): void {
    this.text(x - this.textWidth(s), y, s, c);
  }

  textCenter(x: number, y: number, s: string, c: Color = BLACK): void {
    this.text(x - this.textWidth(s) / 2, y, s, c);
  }
}
