/**
 * Writer and validator for the neutral text bundle consumed by the
 * training library:
 *
 *   meta.txt      4 lines: name / num_nodes / num_features / num_edges
 *   features.txt  n lines of m space-separated reals
 *   edges.txt     one "u v" per line with 0 <= u < v < n
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface Bundle {
  name: string;
  numNodes: number;
  numFeatures: number;
  /** row-major n*m feature values */
  features: Float64Array;
  /** canonical (u < v), lexicographically sorted, deduplicated */
  edges: Array<[number, number]>;
}

/** 6 significant digits round-trips binary/TF-IDF feature values within 5e-6 relative. */
export function formatFeature(x: number): string {
  if (x === 0) return "0";
  if (Number.isInteger(x) && Math.abs(x) < 1e15) return x.toString();
  return Number(x.toPrecision(6)).toString();
}

export function writeBundle(bundle: Bundle, outDir: string): void {
  fs.mkdirSync(outDir, { recursive: true });
  const { name, numNodes: n, numFeatures: m } = bundle;

  fs.writeFileSync(
    path.join(outDir, "meta.txt"),
    `${name}\n${n}\n${m}\n${bundle.edges.length}\n`,
  );

  const featureLines: string[] = [];
  for (let i = 0; i < n; i++) {
    const row: string[] = [];
    for (let j = 0; j < m; j++) row.push(formatFeature(bundle.features[i * m + j]));
    featureLines.push(row.join(" "));
  }
  fs.writeFileSync(path.join(outDir, "features.txt"), featureLines.join("\n") + "\n");

  fs.writeFileSync(
    path.join(outDir, "edges.txt"),
    bundle.edges.map(([u, v]) => `${u} ${v}`).join("\n") + (bundle.edges.length ? "\n" : ""),
  );
}

/** Re-read a written bundle and check every format rule; throws on violation. */
export function validateBundleDir(dir: string): { numNodes: number; numFeatures: number; numEdges: number } {
  const meta = fs.readFileSync(path.join(dir, "meta.txt"), "utf8").trimEnd().split("\n");
  if (meta.length !== 4) throw new Error("meta.txt must have exactly 4 lines");
  const n = parseInt(meta[1], 10);
  const m = parseInt(meta[2], 10);
  const e = parseInt(meta[3], 10);
  if (!(n >= 0 && m >= 0 && e >= 0)) throw new Error("meta.txt counts must be nonnegative integers");

  const featLines = fs
    .readFileSync(path.join(dir, "features.txt"), "utf8")
    .split("\n")
    .filter((l) => l.length > 0);
  if (featLines.length !== n) {
    throw new Error(`features.txt has ${featLines.length} rows, meta declares ${n}`);
  }
  featLines.forEach((line, i) => {
    const parts = line.split(" ");
    if (parts.length !== m) throw new Error(`features.txt line ${i + 1}: ${parts.length} values, expected ${m}`);
    for (const p of parts) {
      if (!Number.isFinite(Number(p))) throw new Error(`features.txt line ${i + 1}: bad real '${p}'`);
    }
  });

  const edgeLines = fs
    .readFileSync(path.join(dir, "edges.txt"), "utf8")
    .split("\n")
    .filter((l) => l.length > 0);
  if (edgeLines.length !== e) {
    throw new Error(`edges.txt has ${edgeLines.length} edges, meta declares ${e}`);
  }
  const seen = new Set<string>();
  edgeLines.forEach((line, i) => {
    const [u, v] = line.split(" ").map((s) => parseInt(s, 10));
    if (!(u >= 0 && u < v && v < n)) {
      throw new Error(`edges.txt line ${i + 1}: '${line}' violates 0 <= u < v < n`);
    }
    const key = `${u},${v}`;
    if (seen.has(key)) throw new Error(`edges.txt line ${i + 1}: duplicate edge ${line}`);
    seen.add(key);
  });

  return { numNodes: n, numFeatures: m, numEdges: e };
}
