"""Baseline branching policies.

Every policy has the same shape: ``policy(action_set, observation, rng)``
returning one member of the action set. Policies never look at the solver
state directly, only at what the environment delivered.
"""

import numpy as np

from .errors import InvalidActionError
from .features import CandidateObservation


def make_rng(seed):
    """Stream used by stochastic policies; same family as the generators."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


def first_candidate(action_set, observation=None, rng=None):
    """Lowest-index candidate; mirrors the engine's first_fractional rule."""
    return action_set[0]


def random_candidate(action_set, observation=None, rng=None):
    if rng is None:
        raise ValueError("random_candidate needs an rng (see make_rng)")
    return action_set[int(rng.integers(len(action_set)))]


def most_fractional(action_set, observation=None, rng=None):
    """Argmax of the candidate fractionality column, ties to lowest index.

    Needs a CandidateObservation so the column exists and rows line up with
    the action set; mirrors the engine's most_fractional rule.
    """
    if not isinstance(observation, CandidateObservation):
        raise InvalidActionError("most_fractional needs the candidates observation")
    fracs = observation.features[:, 7]
    return action_set[int(np.argmax(fracs))]


POLICIES = {
    "first_candidate": first_candidate,
    "random_candidate": random_candidate,
    "most_fractional": most_fractional,
}
