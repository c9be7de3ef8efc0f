/**
 * Minimal CSV reading for the experiment output contract: a header line
 * followed by comma-separated rows, no quoting (the producer never emits
 * commas inside cells).
 */

export interface CsvTable {
  columns: string[];
  /** Raw cell strings, row-major, aligned with `columns`. */
  rows: string[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("CSV is empty (no header)");
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row ${i + 1} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new CsvError("CSV has a header but no data rows");
  }
  return { columns, rows };
}

export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvError(
      `column "${name}" not found; available: ${table.columns.join(", ")}`,
    );
  }
  return idx;
}

/** Numeric values of one column, in row order. */
export function numericColumn(table: CsvTable, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value)) {
      throw new CsvError(`row ${i + 1}, column "${name}": not a number (${row[idx]})`);
    }
    return value;
  });
}

/** Raw string values of one column, in row order. */
export function stringColumn(table: CsvTable, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]);
}
