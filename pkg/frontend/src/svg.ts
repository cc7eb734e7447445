/**
 * Small hand-rolled SVG plotting layer: linear/log axes, polylines, scatter
 * markers, and text annotations.  Output is deterministic for fixed input.
 */

export interface PanelBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

export type ScaleKind = "linear" | "log";

export class Scale {
  constructor(
    readonly kind: ScaleKind,
    readonly domain: [number, number],
    readonly range: [number, number],
  ) {
    if (kind === "log" && (domain[0] <= 0 || domain[1] <= 0)) {
      throw new Error("log scale needs a positive domain");
    }
  }

  map(v: number): number {
    const [d0, d1] = this.domain;
    const [r0, r1] = this.range;
    const t =
      this.kind === "log"
        ? (Math.log(v) - Math.log(d0)) / (Math.log(d1) - Math.log(d0) || 1)
        : (v - d0) / (d1 - d0 || 1);
    return r0 + t * (r1 - r0);
  }

  ticks(target = 5): number[] {
    const [d0, d1] = this.domain;
    if (this.kind === "log") {
      const lo = Math.ceil(Math.log10(d0));
      const hi = Math.floor(Math.log10(d1));
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) {
        out.push(Math.pow(10, e));
      }
      return out.length >= 2 ? out : [d0, d1];
    }
    const span = d1 - d0;
    if (span <= 0) {
      return [d0];
    }
    const raw = span / target;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= target)!;
    const out: number[] = [];
    for (let v = Math.ceil(d0 / step) * step; v <= d1 + 1e-12 * span; v += step) {
      out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
    }
    return out;
  }
}

export function extent(values: number[], pad = 0.05): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    return [0, 1];
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}

export const PALETTE = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"];

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return Number(v.toPrecision(4)).toString();
}

const coord = (v: number) => v.toFixed(2);

export class Panel {
  readonly parts: string[] = [];

  constructor(
    readonly box: PanelBox,
    readonly xScale: Scale,
    readonly yScale: Scale,
  ) {}

  axes(xLabel: string, yLabel: string): void {
    const { x, y, width, height } = this.box;
    this.parts.push(
      `<rect x="${x}" y="${y}" width="${width}" height="${height}" fill="none" stroke="#333"/>`,
    );
    for (const t of this.xScale.ticks()) {
      const px = this.xScale.map(t);
      this.parts.push(
        `<line x1="${coord(px)}" y1="${y + height}" x2="${coord(px)}" y2="${y + height + 4}" stroke="#333"/>`,
        `<text x="${coord(px)}" y="${y + height + 16}" text-anchor="middle" font-size="10">${fmt(t)}</text>`,
      );
    }
    for (const t of this.yScale.ticks()) {
      const py = this.yScale.map(t);
      this.parts.push(
        `<line x1="${x - 4}" y1="${coord(py)}" x2="${x}" y2="${coord(py)}" stroke="#333"/>`,
        `<text x="${x - 6}" y="${coord(py + 3)}" text-anchor="end" font-size="10">${fmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${x + width / 2}" y="${y + height + 30}" text-anchor="middle" font-size="11">${xLabel}</text>`,
      `<text x="${x - 42}" y="${y + height / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 ${x - 42} ${y + height / 2})">${yLabel}</text>`,
    );
  }

  /** Polyline through finite points; NaN samples break the path. */
  line(xs: number[], ys: number[], color: string, dash = ""): void {
    let d = "";
    let pen = false;
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
        pen = false;
        continue;
      }
      const px = coord(this.xScale.map(xs[i]));
      const py = coord(this.yScale.map(ys[i]));
      d += `${pen ? "L" : "M"}${px},${py}`;
      pen = true;
    }
    if (d.length === 0) {
      return;
    }
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.5"${dashAttr}/>`,
    );
  }

  scatter(xs: number[], ys: number[], color: string, r = 3): void {
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
        continue;
      }
      this.parts.push(
        `<circle cx="${coord(this.xScale.map(xs[i]))}" cy="${coord(this.yScale.map(ys[i]))}" r="${r}" fill="${color}" fill-opacity="0.8"/>`,
      );
    }
  }

  annotate(text: string, fx: number, fy: number): void {
    const { x, y, width, height } = this.box;
    this.parts.push(
      `<text x="${coord(x + fx * width)}" y="${coord(y + fy * height)}" font-size="11">${text}</text>`,
    );
  }

  legend(entries: Array<[string, string]>): void {
    const { x, y } = this.box;
    entries.forEach(([label, color], i) => {
      const ly = y + 14 + 14 * i;
      this.parts.push(
        `<line x1="${x + 8}" y1="${ly - 3}" x2="${x + 26}" y2="${ly - 3}" stroke="${color}" stroke-width="2"/>`,
        `<text x="${x + 30}" y="${ly}" font-size="10">${label}</text>`,
      );
    });
  }

  render(): string {
    return `<g class="panel">${this.parts.join("")}</g>`;
  }
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">` +
    `<rect width="${width}" height="${height}" fill="white"/>` +
    body.join("") +
    `</svg>`
  );
}
