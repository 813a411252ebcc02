/**
 * Instance generators, exposed as async iterables over LP text.
 *
 * Element k of a stream is byte-identical to what the solver CLI writes for
 * the same (family, seed, params, index): generation happens in the solver
 * process and only the text crosses over.
 */

import type { EnvServerClient, GeneratedInstance } from "./client.js";

export type Family = "set_cover" | "comb_auction" | "cap_facility" | "indep_set";

export const FAMILIES: readonly Family[] = [
  "set_cover",
  "comb_auction",
  "cap_facility",
  "indep_set",
];

export interface StreamedInstance extends GeneratedInstance {
  index: number;
}

export function generateInstance(
  client: EnvServerClient,
  family: Family,
  seed: number,
  index = 0,
  params: Record<string, unknown> = {},
): Promise<GeneratedInstance> {
  return client.generate(family, seed, index, params);
}

/** Endless seeded stream; take as many elements as needed. */
export async function* instanceStream(
  client: EnvServerClient,
  family: Family,
  seed: number,
  params: Record<string, unknown> = {},
  start = 0,
): AsyncGenerator<StreamedInstance> {
  for (let index = start; ; index++) {
    const inst = await client.generate(family, seed, index, params);
    yield { ...inst, index };
  }
}
