"""Decision-point environments around the branch-and-bound engine.

An Environment glues three parts together: a Dynamics object that owns the
control-flow contract with the engine (and nothing else: no observations,
no rewards), an observation function, and a reward expression. Episodes
follow the solver, which departs from the classic episodic-RL template in
four documented ways:

* reset requires an instance: there is no canonical "start state" without
  a problem to solve;
* episodes can be born terminal: when the root relaxation is already
  integral (or a limit fires immediately) reset returns done=True;
* reset returns a reward too: the offset accrued between the start of
  solving and the first decision point, so per-episode sums match the
  engine's own counters;
* the action set changes at every step and is re-delivered with each
  StepResult, because branching candidates depend on the node.

The Branching environment asks for one fractional variable per decision
node. The Configuring environment is a one-shot bandit: reset performs no
solving, the single action is a parameter mapping, and the episode ends
when the solver has run to completion under the merged parameters.
"""

from dataclasses import dataclass
from pathlib import Path

from . import engine
from .errors import InvalidActionError, SolverPhaseError
from .features import NothingFunction
from .lpfile import read_lp_file
from .problem import Problem
from .rewards import LpIterations


@dataclass
class StepResult:
    observation: object
    action_set: object
    reward: float
    done: bool
    info: dict


def _info(state):
    out = {
        "nodes_processed": state.nodes_processed,
        "dual_bound": state.dual_bound,
        "incumbent_objective": state.incumbent_obj,
        "total_lp_iterations": state.total_lp_iterations,
    }
    if state.is_done:
        out["termination_reason"] = state.termination_reason.value
    return out


class BranchingDynamics:
    """Variable-selection control flow: one action per fractional node."""

    def __init__(self, params=None):
        self.params = params if params is not None else engine.SolverParams()

    def reset_dynamics(self, problem):
        state = engine.start(problem, self.params)
        return state.is_done, self._action_set(state), state

    def step_dynamics(self, state, action):
        try:
            action = int(action)
        except (TypeError, ValueError):
            raise InvalidActionError(f"branching action must be an integer, got {action!r}") from None
        engine.branch(state, action)
        return state.is_done, self._action_set(state)

    @staticmethod
    def _action_set(state):
        return None if state.is_done else list(state.candidates)


class ConfiguringDynamics:
    """Solver-configuration control flow: a single parameter-mapping action."""

    def __init__(self, params=None):
        self.params = params if params is not None else engine.SolverParams()

    def reset_dynamics(self, problem):
        state = engine.new_state(problem, self.params)
        return False, self._action_set(state), state

    def step_dynamics(self, state, action):
        if not isinstance(action, dict):
            raise InvalidActionError(f"configuring action must be a parameter mapping, got {action!r}")
        state.params = engine.merge_params(state.params, action)
        engine.run_to_completion(state)
        return True, None

    @staticmethod
    def _action_set(state):
        return [dict(entry) for entry in engine.PARAMETER_SCHEMA]


class Environment:
    """Gym-flavored reset/step loop over a Dynamics object."""

    def __init__(self, dynamics, observation_function=None, reward_function=None):
        self.dynamics = dynamics
        self.observation_function = (
            observation_function if observation_function is not None else NothingFunction()
        )
        self.reward_function = reward_function if reward_function is not None else LpIterations()
        self.state = None

    def reset(self, instance):
        """Start an episode on the given Problem or LP file path.

        Returns a full StepResult; ``reward`` is the offset accumulated from
        the start of solving up to the first decision point, and ``done``
        may already be True.
        """
        problem = self._coerce(instance)
        done, action_set, state = self.dynamics.reset_dynamics(problem)
        self.state = state
        self.observation_function.before_reset(state)
        observation = self.observation_function.extract(state, done)
        self.reward_function.before_reset(state)
        reward = self.reward_function.evaluate(state, done)
        return StepResult(observation, action_set, reward, done, _info(state))

    def step(self, action):
        if self.state is None:
            raise SolverPhaseError("step() before reset()")
        if self.state.is_done:
            raise SolverPhaseError("step() after the episode ended")
        done, action_set = self.dynamics.step_dynamics(self.state, action)
        observation = self.observation_function.extract(self.state, done)
        reward = self.reward_function.evaluate(self.state, done)
        return StepResult(observation, action_set, reward, done, _info(self.state))

    @staticmethod
    def _coerce(instance):
        if isinstance(instance, Problem):
            return instance
        if isinstance(instance, (str, Path)):
            return read_lp_file(instance)
        raise TypeError(f"instance must be a Problem or a path, got {type(instance).__name__}")


class Branching(Environment):
    def __init__(self, observation_function=None, reward_function=None, params=None):
        super().__init__(BranchingDynamics(params), observation_function, reward_function)


class Configuring(Environment):
    def __init__(self, observation_function=None, reward_function=None, params=None):
        super().__init__(ConfiguringDynamics(params), observation_function, reward_function)
