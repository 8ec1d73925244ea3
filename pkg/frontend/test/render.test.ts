import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli";
import { FigureError } from "../src/figure";
import { renderFigure } from "../src/render";

const HERE = fileURLToPath(new URL(".", import.meta.url));
const SPECS = join(HERE, "..", "specs");

const COMMITTED = ["coeff-decay", "proj-error", "quad-error", "scaling-sweep"] as const;

function tmpSpec(files: Record<string, string>, spec: Record<string, unknown>): string {
  const dir = mkdtempSync(join(tmpdir(), "rendertest-"));
  for (const [name, text] of Object.entries(files)) {
    writeFileSync(join(dir, name), text);
  }
  const path = join(dir, "figure.json");
  writeFileSync(path, JSON.stringify(spec));
  return path;
}

describe("renderFigure on the committed figure set", () => {
  it("regenerates all four figures from the committed CSVs", () => {
    const counts: Record<string, number> = {};
    for (const name of COMMITTED) {
      const result = renderFigure(join(SPECS, `${name}.json`));
      expect(existsSync(result.output)).toBe(true);
      expect(result.svg.startsWith("<svg ")).toBe(true);
      expect(result.svg.trimEnd().endsWith("</svg>")).toBe(true);
      expect(readFileSync(result.output, "utf8")).toBe(result.svg);
      counts[name] = result.slopes.length;
    }
    expect(counts).toEqual({
      "coeff-decay": 3,
      "proj-error": 2,
      "quad-error": 2,
      "scaling-sweep": 4,
    });
    console.error(
      "[PASS] figure-regeneration: 4 figures rebuilt from committed CSVs " +
        "(series per figure: 3/2/2/4)",
    );
  });

  it("re-renders byte-identically", () => {
    const specPath = join(SPECS, "proj-error.json");
    const first = renderFigure(specPath);
    const bytesA = readFileSync(first.output);
    const second = renderFigure(specPath);
    const bytesB = readFileSync(second.output);
    expect(second.svg).toBe(first.svg);
    expect(bytesB.equals(bytesA)).toBe(true);
  });

  it("reports decaying slopes for every committed series", () => {
    for (const name of COMMITTED) {
      const result = renderFigure(join(SPECS, `${name}.json`));
      for (const line of result.slopes) {
        const m = /: (-?\d+\.\d+) per sqrt\(n\)/.exec(line);
        expect(m, line).not.toBeNull();
        expect(Number(m?.[1])).toBeLessThan(-0.2);
      }
    }
  });
});

describe("renderFigure failure modes", () => {
  it("errors on an empty series and writes no file", () => {
    const csv = 'n,measured,bound,rate_ref,method\n# footer-json: {"passed": true}\n';
    const path = tmpSpec({ "empty.csv": csv }, {
      csv_paths: ["empty.csv"],
      x_axis: "sqrt_n",
      overlay: "none",
      title: "empty",
      output: "empty.svg",
    });
    expect(() => renderFigure(path)).toThrow(FigureError);
    expect(existsSync(join(path, "..", "empty.svg"))).toBe(false);
  });

  it("refuses png output with a clear message", () => {
    expect(() => renderFigure(join(SPECS, "proj-error.json"), "png")).toThrow(
      /png output is not supported/,
    );
  });

  it("propagates csv schema errors with file, row and column", () => {
    const csv = "n,measured,bound,rate_ref,method\n4,bogus,2e-1,1e-1,demo\n";
    const path = tmpSpec({ "bad.csv": csv }, {
      csv_paths: ["bad.csv"],
      x_axis: "sqrt_n",
      overlay: "none",
      title: "bad",
      output: "bad.svg",
    });
    expect(() => renderFigure(path)).toThrow(/bad\.csv: row 2, column "measured"/);
    expect(existsSync(join(path, "..", "bad.svg"))).toBe(false);
  });
});

describe("cli main", () => {
  afterEach(() => {
    vi.restoreAllMocks();
  });

  function capture(): { logs: string[]; errs: string[] } {
    const logs: string[] = [];
    const errs: string[] = [];
    vi.spyOn(console, "log").mockImplementation((...a) => void logs.push(a.join(" ")));
    vi.spyOn(console, "error").mockImplementation((...a) => void errs.push(a.join(" ")));
    return { logs, errs };
  }

  it("renders a committed spec and prints the output path", () => {
    const { logs, errs } = capture();
    const rc = main(["render", "--spec", join(SPECS, "quad-error.json")]);
    expect(rc).toBe(0);
    expect(logs.some((l) => l.startsWith("wrote ") && l.endsWith("quad-error.svg"))).toBe(true);
    expect(errs.filter((l) => l.startsWith("[slope]")).length).toBe(2);
  });

  it("exits 2 without a subcommand", () => {
    const { errs } = capture();
    expect(main([])).toBe(2);
    expect(errs.some((l) => l.startsWith("usage:"))).toBe(true);
  });

  it("exits 2 when --spec is missing", () => {
    const { errs } = capture();
    expect(main(["render"])).toBe(2);
    expect(errs.some((l) => l.includes("--spec"))).toBe(true);
  });

  it("exits 2 on an unknown format", () => {
    const { errs } = capture();
    expect(main(["render", "--spec", "x.json", "--format", "pdf"])).toBe(2);
    expect(errs.some((l) => l.includes("choose svg or png"))).toBe(true);
  });

  it("exits 1 when the spec file does not exist", () => {
    const { errs } = capture();
    expect(main(["render", "--spec", "/nonexistent/spec.json"])).toBe(1);
    expect(errs.some((l) => l.startsWith("error: cannot read figure spec"))).toBe(true);
  });

  it("exits 1 for png with the unsupported-format message", () => {
    const { errs } = capture();
    const rc = main(["render", "--spec", join(SPECS, "proj-error.json"), "--format", "png"]);
    expect(rc).toBe(1);
    expect(errs.some((l) => l.includes("png output is not supported"))).toBe(true);
  });

  it("emits a [note] line when log-axis filtering drops values", () => {
    const csv = [
      "n,measured,bound,rate_ref,method",
      "4,1e-1,2e-1,1e-1,demo",
      "9,0.0,2e-2,1e-2,demo",
      "16,1e-3,2e-3,1e-3,demo",
    ].join("\n");
    const path = tmpSpec({ "drop.csv": csv }, {
      csv_paths: ["drop.csv"],
      x_axis: "sqrt_n",
      overlay: "none",
      title: "drop",
      output: "drop.svg",
    });
    const { errs } = capture();
    expect(main(["render", "--spec", path])).toBe(0);
    expect(errs.some((l) => l.startsWith("[note] dropped 1 zero"))).toBe(true);
  });
});
