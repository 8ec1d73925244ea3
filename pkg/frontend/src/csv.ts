/**
 * Strict reader for the experiment-runner CSV schema.
 *
 * Layout: a fixed five-column header `n,measured,bound,rate_ref,method`,
 * one data row per (degree, series) pair with the three middle columns
 * printed as decimal floats (`nan` allowed), and an optional trailing
 * comment line starting with `#` carrying a JSON footer.  Anything that
 * deviates raises {@link CsvSchemaError} naming the column and row.
 */

export const CSV_COLUMNS = ["n", "measured", "bound", "rate_ref", "method"] as const;

export interface DataRow {
  n: number;
  measured: number;
  bound: number;
  rate_ref: number;
  method: string;
}

export interface ParsedCsv {
  /** data rows, in file order */
  rows: DataRow[];
  /** parsed `# footer-json:` payload, if present */
  footer: unknown;
  /** where the text came from, for error messages */
  source: string;
}

export class CsvSchemaError extends Error {
  override name = "CsvSchemaError";
}

const FLOAT_RE = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;

/** Parse one numeric cell; `nan`/`inf` spellings are accepted. */
function parseNumberCell(raw: string, column: string, row: number, source: string): number {
  const s = raw.trim();
  if (FLOAT_RE.test(s)) return Number(s);
  if (/^[+-]?nan$/i.test(s)) return Number.NaN;
  const inf = /^([+-]?)inf(inity)?$/i.exec(s);
  if (inf) return inf[1] === "-" ? Number.NEGATIVE_INFINITY : Number.POSITIVE_INFINITY;
  throw new CsvSchemaError(
    `${source}: row ${row}, column "${column}": cannot parse ${JSON.stringify(raw)} as a number`,
  );
}

export function parseCsv(text: string, source = "<string>"): ParsedCsv {
  const lines = text.split("\n").map((l) => l.replace(/\r$/, ""));
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new CsvSchemaError(`${source}: empty file, expected a header row`);
  }

  const headerCells = (lines[0] ?? "").split(",").map((c) => c.trim());
  if (headerCells.length !== CSV_COLUMNS.length) {
    throw new CsvSchemaError(
      `${source}: row 1 (header): expected ${CSV_COLUMNS.length} columns ` +
        `(${CSV_COLUMNS.join(",")}), got ${headerCells.length}`,
    );
  }
  CSV_COLUMNS.forEach((want, i) => {
    if (headerCells[i] !== want) {
      throw new CsvSchemaError(
        `${source}: row 1 (header), column ${i + 1}: expected "${want}", ` +
          `got ${JSON.stringify(headerCells[i])}`,
      );
    }
  });

  const rows: DataRow[] = [];
  let footer: unknown = null;
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i] ?? "";
    const rowNo = i + 1; // 1-based, counting the header
    if (line.trim() === "") continue;
    if (line.startsWith("#")) {
      const m = /^#\s*footer-json:\s*(.*)$/.exec(line);
      if (m) {
        try {
          footer = JSON.parse(m[1] ?? "");
        } catch (err) {
          throw new CsvSchemaError(
            `${source}: row ${rowNo}: footer comment holds invalid JSON (${(err as Error).message})`,
          );
        }
      }
      continue; // other comments are ignored
    }
    const cells = line.split(",");
    if (cells.length !== CSV_COLUMNS.length) {
      throw new CsvSchemaError(
        `${source}: row ${rowNo}: expected ${CSV_COLUMNS.length} columns, got ${cells.length}`,
      );
    }
    const n = parseNumberCell(cells[0] ?? "", "n", rowNo, source);
    if (!Number.isInteger(n) || n < 0) {
      throw new CsvSchemaError(
        `${source}: row ${rowNo}, column "n": expected a nonnegative integer, ` +
          `got ${JSON.stringify(cells[0])}`,
      );
    }
    const method = (cells[4] ?? "").trim();
    if (method === "") {
      throw new CsvSchemaError(`${source}: row ${rowNo}, column "method": empty tag`);
    }
    rows.push({
      n,
      measured: parseNumberCell(cells[1] ?? "", "measured", rowNo, source),
      bound: parseNumberCell(cells[2] ?? "", "bound", rowNo, source),
      rate_ref: parseNumberCell(cells[3] ?? "", "rate_ref", rowNo, source),
      method,
    });
  }
  return { rows, footer, source };
}
