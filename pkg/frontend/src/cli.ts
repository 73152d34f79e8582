#!/usr/bin/env node
/** rismimo-plot: render a harness CSV through a figure template.
 *
 *   rismimo-plot <results.csv> --template <name> --out <figure.svg>
 *
 * Exit codes: 0 success, 2 usage/schema error.
 */

import * as fs from "fs";
import * as path from "path";

import { CsvSchemaError, parseResultCsv } from "./csv";
import { extractFigure } from "./extract";
import { renderSvg } from "./render";
import { TEMPLATES, templateFor } from "./templates";

interface Args {
    csv: string;
    template?: string;
    out?: string;
}

function parseArgs(argv: string[]): Args {
    const positional: string[] = [];
    const named: Record<string, string> = {};
    for (let i = 0; i < argv.length; i++) {
        const a = argv[i];
        if (a === "--template" || a === "--out") {
            named[a.slice(2)] = argv[++i];
        } else if (a === "--list-templates") {
            named["list"] = "1";
        } else {
            positional.push(a);
        }
    }
    if (named["list"]) {
        for (const name of Object.keys(TEMPLATES).sort()) console.log(name);
        process.exit(0);
    }
    if (positional.length !== 1) {
        throw new Error("usage: rismimo-plot <results.csv> --template <name> --out <figure.svg>");
    }
    return { csv: positional[0], template: named["template"], out: named["out"] };
}

export function main(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (e) {
        console.error((e as Error).message);
        return 2;
    }
    try {
        const text = fs.readFileSync(args.csv, "utf-8");
        const rows = parseResultCsv(text);
        const templateName = args.template ?? rows[0].experiment;
        const fig = extractFigure(rows, templateFor(templateName));
        const svg = renderSvg(fig);
        const out = args.out ?? `${path.basename(args.csv, ".csv")}.svg`;
        fs.writeFileSync(out, svg);
        console.log(`${out}: ${fig.series.length} series, ${fig.pointCount} points`);
        return 0;
    } catch (e) {
        if (e instanceof CsvSchemaError || e instanceof Error) {
            console.error((e as Error).message);
            return 2;
        }
        throw e;
    }
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
