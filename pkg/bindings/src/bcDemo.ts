/**
 * Behavioral-cloning demo: imitate the solver's most-fractional branching
 * rule from candidate features.
 *
 * Collects (candidate-features, chosen-row) pairs by rolling the expert over
 * small set-cover instances, fits a linear scorer with listwise softmax
 * cross-entropy, then deploys the scorer as a branching policy and compares
 * its node counts against a uniform-random policy on held-out instances.
 */

import { pathToFileURL } from "node:url";

import { EnvServerClient } from "./client.js";
import { at } from "./decode.js";
import { BranchingEnv, type CandidateObservation, type StepResult } from "./env.js";

export interface BcDemoOptions {
  python?: string;
  /** Generator seed for the instance stream. */
  seed?: number;
  trainInstances?: number;
  heldOutInstances?: number;
  epochs?: number;
  nodeLimit?: number;
  quiet?: boolean;
}

export interface BcDemoReport {
  trainPairs: number;
  heldOutPairs: number;
  trainAccuracy: number;
  heldOutAccuracy: number;
  /** Mean over held-out decisions of 1 / |action set|. */
  uniformBaseline: number;
  meanNodesLearned: number;
  meanNodesRandom: number;
  allActionsInActionSet: boolean;
  seconds: number;
}

// dense-ish rows so LP vertex values vary and the expert's argmax is
// usually unique instead of a positional tie among 0.5s
const FAMILY_PARAMS = { rows: 25, cols: 50, density: 0.2, max_cost: 100 };
const NUM_FEATURES = 12;
const WEIGHT_DECAY = 1e-3;

interface Decision {
  /** Flattened (k, 12) candidate features. */
  features: number[];
  k: number;
  /** Expert-chosen row. */
  target: number;
}

function expertRow(obs: CandidateObservation): number {
  // fractionality column, ties to the lowest row, as in the solver's rule
  let best = 0;
  for (let i = 1; i < obs.candidates.length; i++) {
    if (at(obs.features, i, 7) > at(obs.features, best, 7)) best = i;
  }
  return best;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

class LinearScorer {
  readonly w = new Float64Array(NUM_FEATURES);
  b = 0;
  readonly mean = new Float64Array(NUM_FEATURES);
  readonly std = new Float64Array(NUM_FEATURES).fill(1);

  fitNormalization(decisions: Decision[]) {
    let rows = 0;
    for (const d of decisions) rows += d.k;
    for (let j = 0; j < NUM_FEATURES; j++) {
      let s = 0;
      for (const d of decisions) for (let i = 0; i < d.k; i++) s += d.features[i * NUM_FEATURES + j];
      this.mean[j] = s / rows;
      let v = 0;
      for (const d of decisions)
        for (let i = 0; i < d.k; i++) v += (d.features[i * NUM_FEATURES + j] - this.mean[j]) ** 2;
      this.std[j] = Math.sqrt(v / rows) || 1;
    }
  }

  scores(d: Decision): number[] {
    const out = new Array<number>(d.k);
    for (let i = 0; i < d.k; i++) {
      let s = this.b;
      for (let j = 0; j < NUM_FEATURES; j++) {
        s += (this.w[j] * (d.features[i * NUM_FEATURES + j] - this.mean[j])) / this.std[j];
      }
      out[i] = s;
    }
    return out;
  }

  pick(d: Decision): number {
    const s = this.scores(d);
    let best = 0;
    for (let i = 1; i < d.k; i++) if (s[i] > s[best]) best = i;
    return best;
  }

  /** One softmax cross-entropy SGD step over a single decision. */
  update(d: Decision, lr: number) {
    const s = this.scores(d);
    const m = Math.max(...s);
    const exps = s.map((x) => Math.exp(x - m));
    const z = exps.reduce((a, x) => a + x, 0);
    for (let i = 0; i < d.k; i++) {
      const grad = exps[i] / z - (i === d.target ? 1 : 0);
      for (let j = 0; j < NUM_FEATURES; j++) {
        this.w[j] -= (lr * grad * (d.features[i * NUM_FEATURES + j] - this.mean[j])) / this.std[j];
      }
      this.b -= lr * grad;
    }
    // decay keeps tie-only decisions from piling weight on noise columns
    for (let j = 0; j < NUM_FEATURES; j++) this.w[j] -= lr * WEIGHT_DECAY * this.w[j];
  }
}

function accuracy(model: LinearScorer, decisions: Decision[]): number {
  if (decisions.length === 0) return 0;
  let hit = 0;
  for (const d of decisions) if (model.pick(d) === d.target) hit++;
  return hit / decisions.length;
}

async function collectExpertEpisode(
  env: BranchingEnv,
  lpText: string,
  sink: Decision[],
): Promise<void> {
  let r = await env.reset({ text: lpText });
  while (!r.done) {
    const obs = r.observation as CandidateObservation;
    const target = expertRow(obs);
    sink.push({ features: Array.from(obs.features.data), k: obs.candidates.length, target });
    r = await env.step(obs.candidates[target]);
  }
}

async function rolloutNodes(
  env: BranchingEnv,
  lpText: string,
  choose: (r: StepResult<number>) => number,
  actionsOk: { value: boolean },
): Promise<number> {
  let r = await env.reset({ text: lpText });
  while (!r.done) {
    const action = choose(r);
    if (!r.actionSet!.includes(action)) actionsOk.value = false;
    r = await env.step(action);
  }
  return r.info.nodes_processed;
}

export async function runBcDemo(options: BcDemoOptions = {}): Promise<BcDemoReport> {
  const t0 = Date.now();
  const seed = options.seed ?? 11;
  const nTrain = options.trainInstances ?? 18;
  const nHeld = options.heldOutInstances ?? 6;
  const epochs = options.epochs ?? 300;
  const log = options.quiet ? () => {} : console.log;

  const client = await EnvServerClient.connect({ python: options.python });
  try {
    const texts: string[] = [];
    for (let k = 0; k < nTrain + nHeld; k++) {
      texts.push((await client.generate("set_cover", seed, k, FAMILY_PARAMS)).lpText);
    }

    const env = await BranchingEnv.create(client, {
      observation: "candidates",
      params: { node_limit: options.nodeLimit ?? 60 },
    });
    const train: Decision[] = [];
    const held: Decision[] = [];
    for (let k = 0; k < texts.length; k++) {
      await collectExpertEpisode(env, texts[k], k < nTrain ? train : held);
    }
    log(`collected ${train.length} training and ${held.length} held-out expert decisions`);

    const model = new LinearScorer();
    model.fitNormalization(train);
    const order = [...train.keys()];
    const rng = mulberry32(seed);
    for (let e = 0; e < epochs; e++) {
      for (let i = order.length - 1; i > 0; i--) {
        const j = Math.floor(rng() * (i + 1));
        [order[i], order[j]] = [order[j], order[i]];
      }
      const lr = 0.3 / (1 + e / 60);
      for (const i of order) model.update(train[i], lr);
    }

    const trainAccuracy = accuracy(model, train);
    const heldOutAccuracy = accuracy(model, held);
    const uniformBaseline =
      held.length === 0 ? 0 : held.reduce((a, d) => a + 1 / d.k, 0) / held.length;
    log(`training accuracy ${trainAccuracy.toFixed(3)}`);
    log(
      `held-out accuracy ${heldOutAccuracy.toFixed(3)} vs uniform baseline ${uniformBaseline.toFixed(3)}`,
    );

    // deploy the scorer and a uniform-random policy on the held-out instances
    const actionsOk = { value: true };
    const pickLearned = (r: StepResult<number>) => {
      const obs = r.observation as CandidateObservation;
      const d: Decision = {
        features: Array.from(obs.features.data),
        k: obs.candidates.length,
        target: 0,
      };
      return obs.candidates[model.pick(d)];
    };
    const rngRandom = mulberry32(seed + 1);
    const pickRandom = (r: StepResult<number>) =>
      r.actionSet![Math.floor(rngRandom() * r.actionSet!.length)];

    let nodesLearned = 0;
    let nodesRandom = 0;
    const randomEnv = await BranchingEnv.create(client, {
      params: { node_limit: options.nodeLimit ?? 60 },
    });
    for (let k = nTrain; k < texts.length; k++) {
      nodesLearned += await rolloutNodes(env, texts[k], pickLearned, actionsOk);
      nodesRandom += await rolloutNodes(randomEnv, texts[k], pickRandom, actionsOk);
    }
    const meanNodesLearned = nodesLearned / nHeld;
    const meanNodesRandom = nodesRandom / nHeld;
    log(
      `mean nodes on held-out instances: learned ${meanNodesLearned.toFixed(1)}, ` +
        `random ${meanNodesRandom.toFixed(1)}`,
    );

    const seconds = (Date.now() - t0) / 1000;
    log(`done in ${seconds.toFixed(1)}s`);
    return {
      trainPairs: train.length,
      heldOutPairs: held.length,
      trainAccuracy,
      heldOutAccuracy,
      uniformBaseline,
      meanNodesLearned,
      meanNodesRandom,
      allActionsInActionSet: actionsOk.value,
      seconds,
    };
  } finally {
    await client.shutdown();
  }
}

const isMain =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  runBcDemo().catch((err) => {
    console.error(err);
    process.exit(1);
  });
}
