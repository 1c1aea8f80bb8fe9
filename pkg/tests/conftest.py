import pathlib

import hypothesis
import pytest

from vpa import DEFAULT_CONFIG, load_problem

hypothesis.settings.register_profile("suite", deadline=None, max_examples=50)
hypothesis.settings.load_profile("suite")

PROBLEMS = pathlib.Path(__file__).resolve().parents[1] / "problems"

# schedule spanning four radius decades at modest cost (tests only)
LIGHT_CONFIG = DEFAULT_CONFIG.replace(radius_factor=10.0, radius_count=5,
                                      weights_per_radius=4, weight_grid=5,
                                      starts_per_weight=4, section_budget=16)


@pytest.fixture(scope="session")
def motzkin():
    return load_problem(PROBLEMS / "motzkin.json")


@pytest.fixture(scope="session")
def hyperbola():
    return load_problem(PROBLEMS / "hyperbola.json")


@pytest.fixture(scope="session")
def degenerate_line():
    return load_problem(PROBLEMS / "degenerate_line.json")


@pytest.fixture(scope="session")
def light_config():
    return LIGHT_CONFIG
