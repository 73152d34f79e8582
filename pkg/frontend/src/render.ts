import * as echarts from "echarts";

import { ExtractedFigure } from "./extract";

export interface RenderOptions {
    width?: number;
    height?: number;
}

const PALETTE = [
    "#4472c4", "#ed7d31", "#70ad47", "#c00000", "#7030a0", "#2e9da6",
    "#b8860b", "#616161", "#e75480", "#3b6b35", "#8b4513", "#00599c",
];

/** Error-bar whiskers for a scatter series: data rows [x, y-se, y+se]. */
function errorBarSeries(name: string, color: string, data: number[][]): echarts.CustomSeriesOption {
    return {
        type: "custom",
        name,
        silent: true,
        legendHoverLink: false,
        data,
        z: 5,
        itemStyle: { color },
        renderItem: (_params: unknown, api: any) => {
            const x = api.value(0);
            const lo = api.coord([x, api.value(1)]);
            const hi = api.coord([x, api.value(2)]);
            const cap = 4;
            const style = { stroke: color, fill: "none", lineWidth: 1 };
            return {
                type: "group",
                children: [
                    { type: "line", shape: { x1: hi[0], y1: hi[1], x2: lo[0], y2: lo[1] }, style },
                    { type: "line", shape: { x1: hi[0] - cap, y1: hi[1], x2: hi[0] + cap, y2: hi[1] }, style },
                    { type: "line", shape: { x1: lo[0] - cap, y1: lo[1], x2: lo[0] + cap, y2: lo[1] }, style },
                ],
            };
        },
    };
}

export function figureOption(fig: ExtractedFigure): echarts.EChartsOption {
    const series: echarts.SeriesOption[] = [];
    const legend: string[] = [];
    fig.series.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        legend.push(s.label);
        if (s.kind === "line") {
            series.push({
                type: "line",
                name: s.label,
                data: s.points.map((p) => [p.x, p.y]),
                showSymbol: true,
                symbolSize: 4,
                itemStyle: { color },
                lineStyle: { color, width: 1.5 },
            });
        } else {
            series.push({
                type: "scatter",
                name: s.label,
                data: s.points.map((p) => [p.x, p.y]),
                symbol: "diamond",
                symbolSize: 9,
                itemStyle: { color },
            });
            const bars = s.points
                .filter((p) => p.se !== undefined && p.se > 0)
                .map((p) => [p.x, p.y - p.se!, p.y + p.se!]);
            if (bars.length > 0) {
                series.push(errorBarSeries(`${s.label} ±1 s.e.`, color, bars));
            }
        }
    });
    return {
        animation: false,
        title: { text: fig.template.title, left: "center", textStyle: { fontSize: 14 } },
        grid: { left: 70, right: 30, top: 50, bottom: 160 },
        legend: { data: legend, bottom: 0, type: "plain", itemWidth: 18 },
        xAxis: {
            type: "value",
            name: fig.template.xLabel,
            nameLocation: "middle",
            nameGap: 28,
            scale: true,
        },
        yAxis: {
            type: fig.template.yLog ? "log" : "value",
            name: fig.template.yLabel,
            nameLocation: "middle",
            nameGap: 50,
            scale: true,
        },
        series,
    };
}

/** Render the figure to an SVG string (server-side, no DOM). */
export function renderSvg(fig: ExtractedFigure, opts: RenderOptions = {}): string {
    const chart = echarts.init(null as unknown as HTMLElement, undefined, {
        renderer: "svg",
        ssr: true,
        width: opts.width ?? 900,
        height: opts.height ?? 640,
    });
    try {
        chart.setOption(figureOption(fig));
        return chart.renderToSVGString();
    } finally {
        chart.dispose();
    }
}
