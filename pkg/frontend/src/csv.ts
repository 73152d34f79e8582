import Papa from "papaparse";

/** One tidy result row as written by the experiment harness. */
export interface ResultRow {
    experiment: string;
    sweep_param: string;
    sweep_value: number;
    metric: string;
    unit: string;
    value: number;
    /** undefined for closed-form rows (column left empty) */
    std_error?: number;
    samples?: number;
}

export const REQUIRED_COLUMNS = [
    "experiment",
    "sweep_param",
    "sweep_value",
    "metric",
    "unit",
    "value",
    "std_error",
    "samples",
] as const;

export class CsvSchemaError extends Error {}

/** Parse harness CSV text; throws CsvSchemaError naming missing columns. */
export function parseResultCsv(text: string): ResultRow[] {
    const parsed = Papa.parse<Record<string, string>>(text.trim(), {
        header: true,
        skipEmptyLines: true,
    });
    if (parsed.errors.length > 0) {
        throw new CsvSchemaError(`CSV parse failure: ${parsed.errors[0].message}`);
    }
    const fields = parsed.meta.fields ?? [];
    const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
    if (missing.length > 0) {
        throw new CsvSchemaError(`CSV is missing required columns: ${missing.join(", ")}`);
    }
    if (parsed.data.length === 0) {
        throw new CsvSchemaError("CSV contains no data rows");
    }
    return parsed.data.map((raw, i) => {
        const value = Number(raw.value);
        const sweep = Number(raw.sweep_value);
        if (!Number.isFinite(value) || !Number.isFinite(sweep)) {
            throw new CsvSchemaError(`row ${i + 2}: non-numeric sweep_value or value`);
        }
        const row: ResultRow = {
            experiment: raw.experiment,
            sweep_param: raw.sweep_param,
            sweep_value: sweep,
            metric: raw.metric,
            unit: raw.unit,
            value,
        };
        if (raw.std_error !== "" && raw.std_error !== undefined) {
            row.std_error = Number(raw.std_error);
        }
        if (raw.samples !== "" && raw.samples !== undefined) {
            row.samples = Number(raw.samples);
        }
        return row;
    });
}
