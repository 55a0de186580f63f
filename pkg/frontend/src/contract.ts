/**
 * The sweep CSV contract this frontend consumes.
 *
 * One header row with exactly these columns, comma separated, then one data
 * row per (scenario, axis point). Parsing is strict: any header or shape
 * drift raises a ContractError carrying a line-by-line column diff instead
 * of guessing at the writer's intent.
 */

export const SWEEP_COLUMNS = [
  "scenario",
  "axis",
  "value",
  "p_md",
  "p_md_err",
  "p_fa",
  "cop",
  "cop_err",
  "p_out",
  "p_out_err",
  "p_suc",
  "p_suc_err",
  "seed",
] as const;

// Columns holding probabilities (must sit in [0, 1]).
const PROBABILITY_COLUMNS = new Set(["p_md", "p_fa", "cop", "p_out", "p_suc"]);
// Columns holding nonnegative error estimates.
const ERROR_COLUMNS = new Set(["p_md_err", "cop_err", "p_out_err", "p_suc_err"]);

export class ContractError extends Error {
  readonly diff: string[];

  constructor(message: string, diff: string[] = []) {
    super(message);
    this.diff = diff;
  }
}

export interface SweepRow {
  /** Verbatim CSV line, preserved for bit-exact --dump output. */
  raw: string;
  scenario: string;
  axis: string;
  value: number;
  metrics: Record<string, number>;
}

export interface SweepTable {
  header: string;
  rows: SweepRow[];
}

export function columnDiff(got: string[]): string[] {
  const want = SWEEP_COLUMNS as readonly string[];
  const diff: string[] = [];
  const gotSet = new Set(got);
  for (const name of want) {
    if (!gotSet.has(name)) diff.push(`  missing column: ${name}`);
  }
  for (const name of got) {
    if (!want.includes(name)) diff.push(`  unexpected column: ${name}`);
  }
  if (diff.length === 0) {
    // same names, wrong order
    for (let i = 0; i < want.length; i++) {
      if (got[i] !== want[i]) diff.push(`  column ${i}: got '${got[i]}', expected '${want[i]}'`);
    }
  }
  return diff;
}

export function parseSweepCsv(text: string): SweepTable {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new ContractError("empty file: expected the sweep header row");
  }
  const header = lines[0];
  const got = header.split(",");
  const diff = columnDiff(got);
  if (diff.length > 0) {
    throw new ContractError("CSV header does not match the sweep contract:", diff);
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const raw = lines[i];
    const fields = raw.split(",");
    if (fields.length !== SWEEP_COLUMNS.length) {
      throw new ContractError(
        `line ${i + 1}: expected ${SWEEP_COLUMNS.length} fields, found ${fields.length}`,
      );
    }
    const metrics: Record<string, number> = {};
    for (let c = 2; c < SWEEP_COLUMNS.length - 1; c++) {
      const name = SWEEP_COLUMNS[c];
      const parsed = Number(fields[c]);
      if (!Number.isFinite(parsed)) {
        throw new ContractError(`line ${i + 1}: column '${name}' is not a finite number: '${fields[c]}'`);
      }
      if (PROBABILITY_COLUMNS.has(name) && (parsed < 0 || parsed > 1)) {
        throw new ContractError(`line ${i + 1}: probability '${name}' outside [0, 1]: ${parsed}`);
      }
      if (ERROR_COLUMNS.has(name) && parsed < 0) {
        throw new ContractError(`line ${i + 1}: error estimate '${name}' is negative: ${parsed}`);
      }
      metrics[name] = parsed;
    }
    rows.push({
      raw,
      scenario: fields[0],
      axis: fields[1],
      value: metrics.value,
      metrics,
    });
  }
  return { header, rows };
}
