import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { plotTrace } from "../src/plotTrace.js";

const FIXTURES = join(__dirname, "..", "fixtures");
const HEADER =
  "step,s,omega,lambda,e_total,e_electronic,e_postselected,p_photon0," +
  "fid_target_raw,fid_target_post,fid_initial";

describe("plotTrace", () => {
  it("renders the two-panel layout from a full propagation trace", () => {
    const text = readFileSync(join(FIXTURES, "two_level_T50_trace.csv"), "utf8");
    const svg = plotTrace([{ text, label: "T=50" }]);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.match(/<g class="panel">/g)).toHaveLength(2);
    expect(svg).toContain(">energy<");
    expect(svg).toContain(">fidelity<");
    expect(svg).toContain("path coordinate s");
    // all six series drawn: 3 energy curves + 3 probability curves
    expect((svg.match(/<path /g) ?? []).length).toBeGreaterThanOrEqual(6);
    // deterministic for fixed input
    expect(plotTrace([{ text, label: "T=50" }])).toBe(svg);
  });

  it("accepts an empty-but-header file and draws bare axes", () => {
    const svg = plotTrace([{ text: HEADER + "\n", label: "empty" }]);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.match(/<g class="panel">/g)).toHaveLength(2);
    expect(svg).not.toContain("<path ");
  });

  it("reports the missing column on schema mismatch", () => {
    const bad = "step,s,omega\n0,0,0\n";
    expect(() => plotTrace([{ text: bad, label: "bad" }])).toThrow(/e_total/);
  });

  it("overlays several traces with labels", () => {
    const text = readFileSync(join(FIXTURES, "two_level_T50_trace.csv"), "utf8");
    const svg = plotTrace([
      { text, label: "T=5" },
      { text, label: "T=50" },
    ]);
    expect(svg).toContain(">T=5<");
    expect(svg).toContain(">T=50<");
  });

  it("splits a concatenated file on a group column", () => {
    const rows = [
      HEADER + ",T",
      "0,0,0,0,-1,-1,nan,0,0,0,1,5",
      "1,1,4,0,1,1,1,1,1,1,0,5",
      "0,0,0,0,-1,-1,nan,0,0,0,1,50",
      "1,1,4,0,1,1,1,1,1,1,0,50",
    ].join("\n");
    const svg = plotTrace([{ text: rows, label: "sweep" }], { groupBy: "T" });
    expect(svg).toContain(">T=5<");
    expect(svg).toContain(">T=50<");
  });
});
