import pytest
from hypothesis import HealthCheck, settings

from drfeas import Ball, FeasibilityProblem, Point

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def three_balls():
    return [
        Ball([0.0, 0.0], 1.0),
        Ball([1.0, 0.0], 1.0),
        Ball([0.5, 0.8], 1.0),
    ]


@pytest.fixture
def three_ball_problem(three_balls):
    return FeasibilityProblem(three_balls, interior_point=Point([0.5, 0.3]))
