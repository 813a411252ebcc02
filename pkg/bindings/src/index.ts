export { EnvServerClient, PROTOCOL } from "./client.js";
export type { ClientOptions, GeneratedInstance, ParameterDescriptor } from "./client.js";
export {
  BranchingEnv,
  ConfiguringEnv,
} from "./env.js";
export type {
  BipartiteObservation,
  CandidateObservation,
  EnvOptions,
  EpisodeInfo,
  Instance,
  Observation,
  ObservationName,
  StepResult,
} from "./env.js";
export { FAMILIES, generateInstance, instanceStream } from "./generators.js";
export type { Family, StreamedInstance } from "./generators.js";
export { at, decodeFloat, decodeFloat64Matrix, decodeInt32Matrix, row } from "./decode.js";
export type { EncodedMatrix, Matrix } from "./decode.js";
export {
  GeneratorParameterError,
  InvalidActionError,
  InvalidParameterError,
  InvalidProblemError,
  LpParseError,
  MilpGymError,
  ProtocolError,
  RemoteError,
  SimplexFailureError,
  SolverPhaseError,
  UnboundedRelaxationError,
  UnsupportedLpFeatureError,
  remoteError,
} from "./errors.js";
export { runBcDemo } from "./bcDemo.js";
export type { BcDemoOptions, BcDemoReport } from "./bcDemo.js";
