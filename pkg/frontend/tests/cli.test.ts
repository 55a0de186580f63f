/**
 * End-to-end tests of the built render_figs binary, fed by real sweep CSVs
 * produced through the producer's public CLI (its external interface).
 */

import { execFileSync, spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { beforeAll, describe, expect, it } from "vitest";

import { SWEEP_COLUMNS } from "../src/contract";

const BIN = path.join(__dirname, "..", "dist", "render_figs.js");
const HEADER = SWEEP_COLUMNS.join(",");

let workDir: string;
let sweepCsv: string;

function renderFigs(args: string[]) {
  return spawnSync("node", [BIN, ...args], { encoding: "utf-8" });
}

beforeAll(() => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "render-figs-"));
  sweepCsv = path.join(workDir, "paper-sec4-zeta.csv");
  // the reference threshold sweep from the producer CLI
  execFileSync("covertfas", ["sweep", "--preset", "paper-sec4", "--out", sweepCsv], {
    stdio: ["ignore", "ignore", "inherit"],
  });
});

describe("render_figs pipeline", () => {
  it("dump round-trips the sweep CSV bit-exactly", () => {
    const res = renderFigs(["--csv", sweepCsv, "--kind", "cop_vs_zeta", "--dump"]);
    expect(res.status).toBe(0);
    expect(res.stdout).toBe(fs.readFileSync(sweepCsv, "utf-8"));
  });

  it("input curves decrease over the threshold axis (checked before plotting)", () => {
    const lines = fs.readFileSync(sweepCsv, "utf-8").trim().split("\n").slice(1);
    const byScenario = new Map<string, number[]>();
    for (const line of lines) {
      const f = line.split(",");
      const cops = byScenario.get(f[0]) ?? [];
      cops.push(Number(f[6]));
      byScenario.set(f[0], cops);
    }
    expect(byScenario.size).toBe(4);
    for (const cops of byScenario.values()) {
      for (let i = 1; i < cops.length; i++) {
        expect(cops[i]).toBeLessThanOrEqual(cops[i - 1] + 2e-3);
      }
    }
  });

  it("renders a deterministic SVG", () => {
    const a = path.join(workDir, "a.svg");
    const b = path.join(workDir, "b.svg");
    expect(renderFigs(["--csv", sweepCsv, "--kind", "cop_vs_zeta", "--out", a]).status).toBe(0);
    expect(renderFigs(["--csv", sweepCsv, "--kind", "cop_vs_zeta", "--out", b]).status).toBe(0);
    const svg = fs.readFileSync(a, "utf-8");
    expect(svg).toBe(fs.readFileSync(b, "utf-8"));
    expect(svg).toContain("<svg ");
    expect(svg.match(/<polyline/g)).toHaveLength(4);
    for (const name of ["fas-20dbm", "fas-25dbm", "fpa-20dbm", "fpa-25dbm"]) {
      expect(svg).toContain(`>${name}</text>`);
    }
  });

  it("renders the power sweep with --log-y", () => {
    const powerCsv = path.join(workDir, "paper-sec4-power.csv");
    const cfg = path.join(workDir, "power.ini");
    fs.writeFileSync(cfg, "[sweep]\naxis = p_a_dbm\nstart = 0\nstop = 40\npoints = 9\n");
    execFileSync(
      "covertfas",
      ["sweep", "--preset", "paper-sec4", "--config", cfg, "--out", powerCsv],
      { stdio: ["ignore", "ignore", "inherit"] },
    );
    const out = path.join(workDir, "power.svg");
    const res = renderFigs(["--csv", powerCsv, "--kind", "suc_vs_power", "--out", out, "--log-y"]);
    expect(res.status).toBe(0);
    expect(fs.readFileSync(out, "utf-8")).toContain("p_suc (log)");
  });

  it("accepts a header-only CSV and draws empty axes", () => {
    const empty = path.join(workDir, "empty.csv");
    fs.writeFileSync(empty, HEADER + "\n");
    const out = path.join(workDir, "empty.svg");
    const res = renderFigs(["--csv", empty, "--kind", "cop_vs_zeta", "--out", out]);
    expect(res.status).toBe(0);
    expect(fs.readFileSync(out, "utf-8")).toContain("no data");
  });
});

describe("render_figs failure modes", () => {
  it("contract violation fails with a column diff", () => {
    const bad = path.join(workDir, "bad.csv");
    const broken = HEADER.replace(",cop,", ",").replace(",p_suc,", ",shiny,");
    fs.writeFileSync(bad, broken + "\n");
    const res = renderFigs(["--csv", bad, "--kind", "cop_vs_zeta", "--out", path.join(workDir, "x.svg")]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("missing column: cop");
    expect(res.stderr).toContain("missing column: p_suc");
    expect(res.stderr).toContain("unexpected column: shiny");
  });

  it("axis/kind mismatch fails loudly", () => {
    const res = renderFigs(["--csv", sweepCsv, "--kind", "suc_vs_power", "--dump"]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("refusing to guess");
  });

  it("unknown kind is a usage error", () => {
    const res = renderFigs(["--csv", sweepCsv, "--kind", "pie", "--out", "x.svg"]);
    expect(res.status).toBe(2);
    expect(res.stderr).toContain("unknown kind");
  });

  it("missing required flags is a usage error", () => {
    expect(renderFigs(["--kind", "cop_vs_zeta"]).status).toBe(2);
    expect(renderFigs(["--csv", sweepCsv, "--kind", "cop_vs_zeta"]).status).toBe(2);
  });

  it("missing input file is an I/O error", () => {
    const res = renderFigs(["--csv", path.join(workDir, "nope.csv"), "--kind", "cop_vs_zeta", "--dump"]);
    expect(res.status).toBe(3);
  });
});
