/**
 * Reader for the simulator's CSV outputs.
 *
 * Both the per-step trace files and the aggregated sweep files are plain
 * comma-separated numerics with a single header row and no quoting, so a
 * split-based parser is all that is needed.  Missing values serialize as
 * "nan" and parse to NaN.
 */

export interface Table {
  columns: string[];
  /** column name -> values, row-aligned */
  data: Map<string, number[]>;
  rowCount: number;
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `row ${i + 1}: expected ${columns.length} cells, got ${cells.length}`,
      );
    }
    for (let j = 0; j < columns.length; j++) {
      data.get(columns[j])!.push(Number(cells[j]));
    }
  }
  return { columns, data, rowCount: lines.length - 1 };
}

/** Fetch a column, reporting the offending name on schema mismatch. */
export function requireColumn(table: Table, name: string): number[] {
  const col = table.data.get(name);
  if (col === undefined) {
    throw new Error(
      `missing column "${name}" (have: ${table.columns.join(", ")})`,
    );
  }
  return col;
}

/** Row indices grouped by the distinct values of one column. */
export function groupRows(table: Table, key: string): Map<number, number[]> {
  const col = requireColumn(table, key);
  const groups = new Map<number, number[]>();
  col.forEach((value, row) => {
    const rows = groups.get(value);
    if (rows) {
      rows.push(row);
    } else {
      groups.set(value, [row]);
    }
  });
  return groups;
}
