import pytest

from biheat.kernel import build_profile
from biheat.stepexample import analyze


@pytest.fixture(scope="session")
def profile():
    return build_profile()


@pytest.fixture(scope="session")
def step_analysis(profile):
    return analyze(profile)
