/** Figure templates, one per built-in experiment of the Python harness.
 *
 * A template fixes the axes and the mapping from metric names to plotted
 * series; legend labels follow the reference study's naming ("sum rate by
 * max-sum", "min rate by max-min", "random phase").  Closed-form metrics
 * render as lines, Monte Carlo metrics as markers with error bars where
 * the std_error column is filled.
 */

export interface SeriesSpec {
    metric: string;
    label: string;
    kind: "line" | "scatter";
}

export interface FigureTemplate {
    name: string;
    title: string;
    xLabel: string;
    yLabel: string;
    yLog?: boolean;
    series: SeriesSpec[];
}

function cfMc(metricBase: string, label: string): SeriesSpec[] {
    return [
        { metric: `${metricBase}_cf`, label, kind: "line" },
        { metric: `${metricBase}_mc`, label: `${label} (simulation)`, kind: "scatter" },
    ];
}

const RATE_Y = "rate (bit/s/Hz)";

function rateSweepSeries(): SeriesSpec[] {
    return [
        ...cfMc("sum_rate_max_sum", "sum rate by max-sum"),
        ...cfMc("min_rate_max_sum", "min rate by max-sum"),
        ...cfMc("sum_rate_max_min", "sum rate by max-min"),
        ...cfMc("min_rate_max_min", "min rate by max-min"),
        ...cfMc("sum_rate_random", "sum rate by random phase"),
        ...cfMc("min_rate_random", "min rate by random phase"),
    ];
}

export const TEMPLATES: Record<string, FigureTemplate> = {
    "fig3-moments": {
        name: "fig3-moments",
        title: "Desired signal and sum interference power of user 1",
        xLabel: "number of reflecting elements N",
        yLabel: "power (linear)",
        yLog: true,
        series: [
            ...cfMc("signal_phi1", "signal power, phase set 1"),
            ...cfMc("interf_phi1", "sum interference power, phase set 1"),
            ...cfMc("signal_phi2", "signal power, phase set 2"),
            ...cfMc("interf_phi2", "sum interference power, phase set 2"),
        ],
    },
    "fig4-rician-sweep": {
        name: "fig4-rician-sweep",
        title: "Rates versus the Rician factor of the panel-BS channel",
        xLabel: "Rician factor delta",
        yLabel: RATE_Y,
        series: rateSweepSeries(),
    },
    "fig5-pathloss-sweep": {
        name: "fig5-pathloss-sweep",
        title: "Rates versus the panel-BS path-loss exponent",
        xLabel: "path-loss exponent",
        yLabel: RATE_Y,
        series: rateSweepSeries(),
    },
    "fig6-condition": {
        name: "fig6-condition",
        title: "Average condition number of the cascaded channel",
        xLabel: "number of reflecting elements N",
        yLabel: "condition number",
        series: [
            { metric: "cond_max_min_mc", label: "optimized phase (max-min)", kind: "scatter" },
            { metric: "cond_random_mc", label: "random phase", kind: "scatter" },
        ],
    },
    "fig7-antennas": {
        name: "fig7-antennas",
        title: "Sum rate and minimum user rate versus the number of BS antennas",
        xLabel: "number of BS antennas M",
        yLabel: RATE_Y,
        series: [
            ...cfMc("sum_rate_max_min_n16", "sum rate by max-min, N=16"),
            ...cfMc("min_rate_max_min_n16", "min rate by max-min, N=16"),
            ...cfMc("sum_rate_max_min_n64", "sum rate by max-min, N=64"),
            ...cfMc("min_rate_max_min_n64", "min rate by max-min, N=64"),
            { metric: "sum_rate_random_n16_cf", label: "sum rate by random phase, N=16", kind: "line" },
            { metric: "min_rate_random_n16_cf", label: "min rate by random phase, N=16", kind: "line" },
            { metric: "sum_rate_random_n64_cf", label: "sum rate by random phase, N=64", kind: "line" },
            { metric: "min_rate_random_n64_cf", label: "min rate by random phase, N=64", kind: "line" },
        ],
    },
    "fig8-power-scaling": {
        name: "fig8-power-scaling",
        title: "Minimum user rate with transmit power scaled as 100/M",
        xLabel: "number of BS antennas M",
        yLabel: RATE_Y,
        series: [
            ...cfMc("min_rate_max_min_n16", "min rate by max-min, N=16"),
            ...cfMc("min_rate_max_min_n64", "min rate by max-min, N=64"),
            { metric: "min_rate_random_n16_cf", label: "min rate by random phase, N=16", kind: "line" },
            { metric: "min_rate_random_n64_cf", label: "min rate by random phase, N=64", kind: "line" },
            { metric: "min_rate_limit_n16_cf", label: "large-M ceiling, N=16", kind: "line" },
            { metric: "min_rate_limit_n64_cf", label: "large-M ceiling, N=64", kind: "line" },
        ],
    },
    "fig9-users": {
        name: "fig9-users",
        title: "Achievable rate versus the number of served users",
        xLabel: "number of users K",
        yLabel: RATE_Y,
        series: [
            ...cfMc("sum_rate_max_min", "sum rate by max-min"),
            ...cfMc("min_rate_max_min", "min rate by max-min"),
            { metric: "sum_rate_random_cf", label: "sum rate by random phase", kind: "line" },
            { metric: "min_rate_random_cf", label: "min rate by random phase", kind: "line" },
        ],
    },
    "fig10-discrete": {
        name: "fig10-discrete",
        title: "Minimum user rate under continuous and discrete phases",
        xLabel: "number of reflecting elements N",
        yLabel: RATE_Y,
        series: [
            ...cfMc("min_rate_max_min_cont", "min rate by max-min, continuous"),
            { metric: "min_rate_max_min_b1_cf", label: "min rate by max-min, 1 bit", kind: "line" },
            ...cfMc("min_rate_max_min_b2", "min rate by max-min, 2 bits"),
            { metric: "min_rate_max_min_b3_cf", label: "min rate by max-min, 3 bits", kind: "line" },
            { metric: "min_rate_random_cont_cf", label: "random phase, continuous", kind: "line" },
            { metric: "min_rate_random_b2_cf", label: "random phase, 2 bits", kind: "line" },
        ],
    },
};

export function templateFor(name: string): FigureTemplate {
    const t = TEMPLATES[name];
    if (!t) {
        throw new Error(
            `unknown figure template '${name}'; available: ${Object.keys(TEMPLATES).sort().join(", ")}`,
        );
    }
    return t;
}
