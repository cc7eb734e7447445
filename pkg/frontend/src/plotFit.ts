/**
 * Log-log scatter of final vs initial fidelity error with an annotated
 * power-law fit, colored by correlation strength when a ``u`` column exists.
 */

import { groupRows, parseCsv, requireColumn } from "./csv.js";
import { fitPowerLaw, PowerLawFit } from "./fit.js";
import { extent, Panel, PALETTE, Scale, svgDocument } from "./svg.js";

export interface FitStyle {
  width?: number;
  height?: number;
}

export interface FitResult {
  svg: string;
  fit: PowerLawFit;
}

export function plotFit(text: string, style: FitStyle = {}): FitResult {
  const width = style.width ?? 480;
  const height = style.height ?? 440;
  const table = parseCsv(text);
  const epsInitial = requireColumn(table, "eps_initial");
  const epsFinal = requireColumn(table, "eps_final");
  const fit = fitPowerLaw(epsInitial, epsFinal);

  const positive = (v: number) => v > 0 && Number.isFinite(v);
  const xs = epsInitial.filter(positive);
  const ys = epsFinal.filter(positive);
  const [xLo, xHi] = extent(xs.map(Math.log10), 0.08).map((e) => Math.pow(10, e));
  const [yLo, yHi] = extent(ys.map(Math.log10), 0.08).map((e) => Math.pow(10, e));

  const box = { x: 70, y: 30, width: width - 100, height: height - 90 };
  const panel = new Panel(
    box,
    new Scale("log", [xLo, xHi], [box.x, box.x + box.width]),
    new Scale("log", [yLo, yHi], [box.y + box.height, box.y]),
  );
  panel.axes("initial-state error", "final-state error");

  const legend: Array<[string, string]> = [];
  if (table.columns.includes("u")) {
    let i = 0;
    for (const [u, rows] of groupRows(table, "u")) {
      const color = PALETTE[i % PALETTE.length];
      panel.scatter(
        rows.map((r) => epsInitial[r]),
        rows.map((r) => epsFinal[r]),
        color,
      );
      legend.push([`U/t = ${u}`, color]);
      i++;
    }
  } else {
    panel.scatter(epsInitial, epsFinal, PALETTE[0]);
  }

  // fitted line across the plotted range
  const lineX = [xLo, xHi];
  const lineY = lineX.map((x) => fit.prefactor * Math.pow(x, fit.exponent));
  panel.line(lineX, lineY, "#333", "5 3");
  panel.annotate(
    `final = ${fit.prefactor.toFixed(3)} * initial^${fit.exponent.toFixed(3)}`,
    0.05,
    0.08,
  );
  if (legend.length > 0) {
    panel.legend(legend);
  }
  return { svg: svgDocument(width, height, [panel.render()]), fit };
}
