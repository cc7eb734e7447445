/**
 * Two-panel propagation figure: energies vs the path coordinate on top,
 * fidelities and the photon-vacuum probability below.
 *
 * Accepts one trace or several (overlaid and labeled); alternatively, a
 * single concatenated file with a group column produces one curve set per
 * group value.
 */

import { groupRows, parseCsv, requireColumn, Table } from "./csv.js";
import { extent, Panel, PALETTE, Scale, svgDocument } from "./svg.js";

export interface TraceInput {
  text: string;
  label: string;
}

export interface TraceStyle {
  width?: number;
  height?: number;
  groupBy?: string;
}

const ENERGY_SERIES: Array<[string, string]> = [
  ["e_total", "total"],
  ["e_electronic", "electronic"],
  ["e_postselected", "post-selected"],
];

const FIDELITY_SERIES: Array<[string, string]> = [
  ["fid_target_raw", "target (raw)"],
  ["fid_target_post", "target (post-selected)"],
  ["p_photon0", "p(photon=0)"],
];

interface Series {
  label: string;
  s: number[];
  columns: Map<string, number[]>;
}

function pick(table: Table, rows: number[] | null, name: string): number[] {
  const col = requireColumn(table, name);
  return rows === null ? col : rows.map((r) => col[r]);
}

function collectSeries(inputs: TraceInput[], style: TraceStyle): Series[] {
  const series: Series[] = [];
  for (const input of inputs) {
    const table = parseCsv(input.text);
    const wanted = ["s", ...ENERGY_SERIES.map(([c]) => c), ...FIDELITY_SERIES.map(([c]) => c)];
    const groups: Array<[string, number[] | null]> =
      style.groupBy && table.columns.includes(style.groupBy)
        ? [...groupRows(table, style.groupBy).entries()].map(
            ([value, rows]): [string, number[] | null] => [
              `${style.groupBy}=${value}`,
              rows,
            ],
          )
        : [[input.label, null]];
    for (const [label, rows] of groups) {
      const columns = new Map<string, number[]>();
      for (const name of wanted) {
        columns.set(name, pick(table, rows, name));
      }
      series.push({ label, s: columns.get("s")!, columns });
    }
  }
  return series;
}

export function plotTrace(inputs: TraceInput[], style: TraceStyle = {}): string {
  if (inputs.length === 0) {
    throw new Error("no trace inputs given");
  }
  const width = style.width ?? 560;
  const height = style.height ?? 520;
  const series = collectSeries(inputs, style);
  const multi = series.length > 1;

  const sValues = series.flatMap((sr) => sr.s);
  const energyValues = series.flatMap((sr) =>
    ENERGY_SERIES.flatMap(([c]) => sr.columns.get(c)!),
  );
  const panels: string[] = [];
  const boxes = [
    { x: 70, y: 30, width: width - 100, height: height / 2 - 70 },
    { x: 70, y: height / 2 + 10, width: width - 100, height: height / 2 - 70 },
  ];

  const xScale = (box: { x: number; width: number }) =>
    new Scale("linear", extent(sValues.length ? sValues : [0, 1], 0), [
      box.x,
      box.x + box.width,
    ]);

  // top: energies
  {
    const box = boxes[0];
    const panel = new Panel(
      box,
      xScale(box),
      new Scale("linear", extent(energyValues), [box.y + box.height, box.y]),
    );
    panel.axes("path coordinate s", "energy");
    const legend: Array<[string, string]> = [];
    series.forEach((sr, si) => {
      ENERGY_SERIES.forEach(([col, name], ci) => {
        const color = PALETTE[(multi ? si : ci) % PALETTE.length];
        panel.line(sr.s, sr.columns.get(col)!, color, ci === 2 ? "4 2" : "");
        if (si === 0 && !multi) legend.push([name, color]);
      });
      if (multi) legend.push([sr.label, PALETTE[si % PALETTE.length]]);
    });
    panel.legend(legend);
    panels.push(panel.render());
  }

  // bottom: fidelities and vacuum probability
  {
    const box = boxes[1];
    const panel = new Panel(
      box,
      xScale(box),
      new Scale("linear", [0, 1.05], [box.y + box.height, box.y]),
    );
    panel.axes("path coordinate s", "fidelity");
    const legend: Array<[string, string]> = [];
    series.forEach((sr, si) => {
      FIDELITY_SERIES.forEach(([col, name], ci) => {
        const color = PALETTE[(multi ? si : ci) % PALETTE.length];
        panel.line(sr.s, sr.columns.get(col)!, color, ci === 2 ? "4 2" : "");
        if (si === 0 && !multi) legend.push([name, color]);
      });
      if (multi) legend.push([sr.label, PALETTE[si % PALETTE.length]]);
    });
    panel.legend(legend);
    panels.push(panel.render());
  }

  return svgDocument(width, height, panels);
}
