#!/usr/bin/env node
/**
 * Figure generation from simulator CSV output.
 *
 * Usage:
 *   tsx src/cli.ts plot-trace trace.csv [more.csv ...] [--labels a,b] \
 *       [--group column] [-o out.svg]
 *   tsx src/cli.ts plot-fit scatter.csv [-o out.svg]
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { plotFit } from "./plotFit.js";
import { plotTrace, TraceInput } from "./plotTrace.js";

interface Args {
  files: string[];
  out: string;
  labels: string[] | null;
  group: string | undefined;
}

function parseArgs(argv: string[], defaultOut: string): Args {
  const files: string[] = [];
  let out = defaultOut;
  let labels: string[] | null = null;
  let group: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "-o" || a === "--out") {
      out = argv[++i];
    } else if (a === "--labels") {
      labels = argv[++i].split(",");
    } else if (a === "--group") {
      group = argv[++i];
    } else if (a.startsWith("-")) {
      throw new Error(`unknown option ${a}`);
    } else {
      files.push(a);
    }
  }
  if (files.length === 0) {
    throw new Error("no input CSV given");
  }
  return { files, out, labels, group };
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === "plot-trace") {
    const args = parseArgs(rest, "trace.svg");
    const inputs: TraceInput[] = args.files.map((f, i) => ({
      text: readFileSync(f, "utf8"),
      label: args.labels?.[i] ?? basename(f, ".csv"),
    }));
    writeFileSync(args.out, plotTrace(inputs, { groupBy: args.group }));
    console.log(`wrote ${args.out}`);
    return 0;
  }
  if (command === "plot-fit") {
    const args = parseArgs(rest, "fit.svg");
    const { svg, fit } = plotFit(readFileSync(args.files[0], "utf8"));
    writeFileSync(args.out, svg);
    console.log(
      `wrote ${args.out}  (prefactor=${fit.prefactor.toFixed(4)}, ` +
        `exponent=${fit.exponent.toFixed(4)}, n=${fit.n})`,
    );
    return 0;
  }
  console.error("usage: cli.ts plot-trace|plot-fit <csv...> [-o out.svg]");
  return 2;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(basename(process.argv[1]));
if (invokedDirectly) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    process.exit(2);
  }
}
