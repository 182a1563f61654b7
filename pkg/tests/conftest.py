"""Shared fixtures: the three worked parameter sets and their profiles."""

import pytest

from logistic_rd.diffusivity import solve_profile
from logistic_rd.model import ReactionModel, SymmetryParams
from logistic_rd.solution import assemble

# (model, K, A, theta_max)
CASES = {
    "fisher": (ReactionModel.fisher(1.0), 1.0, -1.5, 2.0),
    "huxley": (ReactionModel.huxley(1.0), 1.0, -1.5, 1.0),
    "fhn": (ReactionModel.fhn(0.5, -1.0), 1.0, -1.5, 1.0),
}


def case(name):
    model, K, A, theta_max = CASES[name]
    return model, SymmetryParams.oscillatory(A, K), theta_max


@pytest.fixture(scope="session")
def profiles():
    out = {}
    for name in CASES:
        model, params, theta_max = case(name)
        out[name] = solve_profile(model, params, theta_max)
    return out


@pytest.fixture(scope="session")
def solutions(profiles):
    out = {}
    for name, prof in profiles.items():
        out[name] = assemble(prof.model, prof.params, prof)
    return out
