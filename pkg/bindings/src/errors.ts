/**
 * Error types mirroring the solver package's exception hierarchy.
 *
 * The env-server reports failures in-band as `{type, message}`; `remoteError`
 * turns that pair back into a typed instance so callers can `instanceof`
 * against the same names they would catch on the Python side. Messages are
 * passed through verbatim.
 */

export class MilpGymError extends Error {
  /** The exception class name reported by the server. */
  readonly remoteType: string;

  constructor(message: string, remoteType?: string) {
    super(message);
    this.name = new.target.name;
    this.remoteType = remoteType ?? new.target.name;
  }
}

export class ProtocolError extends MilpGymError {}
export class LpParseError extends MilpGymError {}
export class UnsupportedLpFeatureError extends LpParseError {}
export class InvalidProblemError extends MilpGymError {}
export class SimplexFailureError extends MilpGymError {}
export class UnboundedRelaxationError extends MilpGymError {}
export class SolverPhaseError extends MilpGymError {}
export class InvalidActionError extends MilpGymError {}
export class InvalidParameterError extends MilpGymError {}
export class GeneratorParameterError extends MilpGymError {}

/** Server-side failure with no dedicated class here (e.g. a bare ValueError). */
export class RemoteError extends MilpGymError {}

const BY_TYPE: Record<string, new (message: string, remoteType?: string) => MilpGymError> = {
  MilpGymError,
  ProtocolError,
  LpParseError,
  UnsupportedLpFeatureError,
  InvalidProblemError,
  SimplexFailureError,
  UnboundedRelaxationError,
  SolverPhaseError,
  InvalidActionError,
  InvalidParameterError,
  GeneratorParameterError,
};

export function remoteError(type: string, message: string): MilpGymError {
  const cls = BY_TYPE[type];
  return cls ? new cls(message) : new RemoteError(message, type);
}
