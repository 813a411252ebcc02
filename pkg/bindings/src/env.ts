/**
 * Environment wrappers over an EnvServerClient: construction, reset, step.
 *
 * These are a thin veneer; every decision, reward, and error comes from the
 * solver process. The wrappers only translate payloads (typed arrays out of
 * base64 matrices, wire floats back to numbers) and keep the env_id.
 */

import type { EnvServerClient } from "./client.js";
import {
  decodeFloat,
  decodeFloat64Matrix,
  decodeInt32Matrix,
  type EncodedMatrix,
  type Matrix,
} from "./decode.js";

export type ObservationName = "nothing" | "bipartite" | "candidates";

export interface EnvOptions {
  observation?: ObservationName;
  /** Reuse the static variable columns across an episode (bipartite only). */
  cache?: boolean;
  /** Reward expression text, e.g. "lp_iterations" or "-1 * nnodes". */
  reward?: string;
  /** Solver parameters: node_limit, time_limit, gap_tol, node_selection, ... */
  params?: Record<string, unknown>;
}

export interface CandidateObservation {
  kind: "candidates";
  /** (num_candidates, 12), rows aligned with the action set. */
  features: Matrix<Float64Array>;
  candidates: number[];
}

export interface BipartiteObservation {
  kind: "bipartite";
  variableFeatures: Matrix<Float64Array>;
  constraintFeatures: Matrix<Float64Array>;
  edgeIndex: Matrix<Int32Array>;
  edgeValues: Matrix<Float64Array>;
}

export type Observation = CandidateObservation | BipartiteObservation | null;

export interface EpisodeInfo {
  nodes_processed: number;
  dual_bound: number;
  incumbent_objective: number | null;
  total_lp_iterations: number;
  termination_reason?: string;
}

export interface StepResult<A> {
  observation: Observation;
  actionSet: A[] | null;
  reward: number;
  done: boolean;
  info: EpisodeInfo;
}

export type Instance = { text: string } | { path: string };

interface WireStep {
  observation: unknown;
  action_set: unknown;
  reward: number | string;
  done: boolean;
  info: Record<string, unknown>;
}

function decodeObservation(obs: unknown): Observation {
  if (obs === null || obs === undefined) return null;
  const o = obs as Record<string, unknown>;
  if (o.kind === "candidates") {
    return {
      kind: "candidates",
      features: decodeFloat64Matrix(o.features as EncodedMatrix),
      candidates: o.candidates as number[],
    };
  }
  if (o.kind === "bipartite") {
    return {
      kind: "bipartite",
      variableFeatures: decodeFloat64Matrix(o.variable_features as EncodedMatrix),
      constraintFeatures: decodeFloat64Matrix(o.constraint_features as EncodedMatrix),
      edgeIndex: decodeInt32Matrix(o.edge_index as EncodedMatrix),
      edgeValues: decodeFloat64Matrix(o.edge_values as EncodedMatrix),
    };
  }
  throw new TypeError(`unknown observation kind ${JSON.stringify(o.kind)}`);
}

function decodeStep<A>(wire: WireStep): StepResult<A> {
  const info: Record<string, unknown> = {};
  for (const [k, v] of Object.entries(wire.info)) {
    info[k] = typeof v === "string" && k !== "termination_reason" ? decodeFloat(v) : v;
  }
  return {
    observation: decodeObservation(wire.observation),
    actionSet: (wire.action_set as A[] | null) ?? null,
    reward: decodeFloat(wire.reward) as number,
    done: wire.done,
    info: info as unknown as EpisodeInfo,
  };
}

abstract class RemoteEnv<A> {
  protected constructor(
    protected readonly client: EnvServerClient,
    readonly envId: number,
  ) {}

  protected static async createRemote(
    client: EnvServerClient,
    kind: "branching" | "configuring",
    options: EnvOptions,
  ): Promise<number> {
    const r = (await client.request("new_env", {
      env: kind,
      observation: options.observation,
      cache: options.cache,
      reward: options.reward,
      params: options.params,
    })) as { env_id: number };
    return r.env_id;
  }

  async reset(instance: Instance): Promise<StepResult<A>> {
    const fields =
      "text" in instance ? { instance_text: instance.text } : { instance_path: instance.path };
    return decodeStep<A>((await this.client.request("reset", { env_id: this.envId, ...fields })) as WireStep);
  }

  async step(action: A): Promise<StepResult<A>> {
    return decodeStep<A>(
      (await this.client.request("step", { env_id: this.envId, action })) as WireStep,
    );
  }

  async close(): Promise<void> {
    await this.client.request("close_env", { env_id: this.envId });
  }
}

/** Branch-variable selection: one integer action per decision point. */
export class BranchingEnv extends RemoteEnv<number> {
  static async create(client: EnvServerClient, options: EnvOptions = {}): Promise<BranchingEnv> {
    return new BranchingEnv(client, await RemoteEnv.createRemote(client, "branching", options));
  }
}

/** Solver configuration: a single parameter-mapping action, then the solve runs. */
export class ConfiguringEnv extends RemoteEnv<Record<string, unknown>> {
  static async create(client: EnvServerClient, options: EnvOptions = {}): Promise<ConfiguringEnv> {
    return new ConfiguringEnv(client, await RemoteEnv.createRemote(client, "configuring", options));
  }
}
