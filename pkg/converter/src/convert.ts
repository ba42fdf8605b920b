/**
 * Core conversion: binary .npy shards -> neutral text bundle, plus a
 * report comparing the produced statistics to the published reference
 * counts for the standard benchmark datasets.
 *
 * Expected source layout (inside sourceDir):
 *   <dataset>.features.npy   2-D array, one row per node
 *   <dataset>.edges.npy      2-D int array of shape (E, 2), any order,
 *                            possibly with duplicates / reversed pairs /
 *                            self-loops — all normalized away here
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseNpy } from "./npy.js";
import { Bundle, writeBundle, validateBundleDir } from "./bundle.js";

export interface ReferenceStats {
  nodes: number;
  edges: number;
  features: number;
}

/** Published statistics for the standard benchmark graphs. */
export const REFERENCE_STATS: Record<string, ReferenceStats> = {
  cora: { nodes: 2708, edges: 5429, features: 1433 },
  citeseer: { nodes: 3327, edges: 4732, features: 3703 },
  pubmed: { nodes: 19717, edges: 44338, features: 500 },
  cs: { nodes: 18333, edges: 81894, features: 6805 },
  photo: { nodes: 7487, edges: 119043, features: 745 },
};

export interface ConversionReport {
  dataset: string;
  numNodes: number;
  numFeatures: number;
  numEdges: number;
  droppedSelfLoops: number;
  droppedDuplicates: number;
  reference: ReferenceStats | null;
  nodesMatch: boolean | null;
  featuresMatch: boolean | null;
  /** informational only: public distributions disagree on edge counts */
  edgesMatch: boolean | null;
}

export function convert(sourceDir: string, dataset: string, outDir: string): ConversionReport {
  const featuresPath = path.join(sourceDir, `${dataset}.features.npy`);
  const edgesPath = path.join(sourceDir, `${dataset}.edges.npy`);
  for (const p of [featuresPath, edgesPath]) {
    if (!fs.existsSync(p)) throw new Error(`missing source shard: ${p}`);
  }

  const features = parseNpy(fs.readFileSync(featuresPath));
  if (features.shape.length !== 2) {
    throw new Error(`${featuresPath}: expected a 2-D array, got shape (${features.shape})`);
  }
  const [numNodes, numFeatures] = features.shape;

  const rawEdges = parseNpy(fs.readFileSync(edgesPath));
  if (rawEdges.shape.length !== 2 || rawEdges.shape[1] !== 2) {
    throw new Error(`${edgesPath}: expected shape (E, 2), got (${rawEdges.shape})`);
  }

  let droppedSelfLoops = 0;
  let droppedDuplicates = 0;
  const seen = new Set<string>();
  const edges: Array<[number, number]> = [];
  for (let k = 0; k < rawEdges.shape[0]; k++) {
    let u = rawEdges.data[2 * k];
    let v = rawEdges.data[2 * k + 1];
    if (!Number.isInteger(u) || !Number.isInteger(v) || u < 0 || v < 0 || u >= numNodes || v >= numNodes) {
      throw new Error(`${edgesPath}: edge ${k} (${u}, ${v}) out of range [0, ${numNodes})`);
    }
    if (u === v) {
      droppedSelfLoops++;
      continue;
    }
    if (u > v) [u, v] = [v, u];
    const key = `${u},${v}`;
    if (seen.has(key)) {
      droppedDuplicates++;
      continue;
    }
    seen.add(key);
    edges.push([u, v]);
  }
  edges.sort((a, b) => a[0] - b[0] || a[1] - b[1]);

  const bundle: Bundle = {
    name: dataset,
    numNodes,
    numFeatures,
    features: features.data,
    edges,
  };
  writeBundle(bundle, outDir);
  validateBundleDir(outDir);

  const reference = REFERENCE_STATS[dataset] ?? null;
  return {
    dataset,
    numNodes,
    numFeatures,
    numEdges: edges.length,
    droppedSelfLoops,
    droppedDuplicates,
    reference,
    nodesMatch: reference ? numNodes === reference.nodes : null,
    featuresMatch: reference ? numFeatures === reference.features : null,
    edgesMatch: reference ? edges.length === reference.edges : null,
  };
}
