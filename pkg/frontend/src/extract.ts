import { CsvSchemaError, ResultRow } from "./csv";
import { FigureTemplate } from "./templates";

export interface SeriesPoint {
    x: number;
    y: number;
    se?: number;
}

export interface ExtractedSeries {
    metric: string;
    label: string;
    kind: "line" | "scatter";
    points: SeriesPoint[];
}

export interface ExtractedFigure {
    template: FigureTemplate;
    sweepParam: string;
    series: ExtractedSeries[];
    /** total plotted points; equals the number of CSV data rows */
    pointCount: number;
}

/** Map CSV rows onto a template's series.
 *
 * Every row must belong to a series of the template and every series must
 * be present in the CSV, otherwise the data does not match the figure and
 * a CsvSchemaError names the offending metric.  Points keep one entry per
 * row, ordered by sweep value.
 */
export function extractFigure(rows: ResultRow[], template: FigureTemplate): ExtractedFigure {
    if (rows.length === 0) {
        throw new CsvSchemaError("no rows to plot");
    }
    const known = new Map(template.series.map((s) => [s.metric, s]));
    const byMetric = new Map<string, SeriesPoint[]>();
    for (const row of rows) {
        if (!known.has(row.metric)) {
            throw new CsvSchemaError(
                `metric '${row.metric}' is not part of template '${template.name}'`,
            );
        }
        const pts = byMetric.get(row.metric) ?? [];
        pts.push({ x: row.sweep_value, y: row.value, se: row.std_error });
        byMetric.set(row.metric, pts);
    }
    const missing = template.series.filter((s) => !byMetric.has(s.metric));
    if (missing.length > 0) {
        throw new CsvSchemaError(
            `CSV lacks series required by template '${template.name}': ` +
            missing.map((s) => s.metric).join(", "),
        );
    }
    const series: ExtractedSeries[] = template.series.map((s) => ({
        metric: s.metric,
        label: s.label,
        kind: s.kind,
        points: byMetric
            .get(s.metric)!
            .slice()
            .sort((a, b) => a.x - b.x),
    }));
    const pointCount = series.reduce((acc, s) => acc + s.points.length, 0);
    return {
        template,
        sweepParam: rows[0].sweep_param,
        series,
        pointCount,
    };
}
