import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from constructor import gallery  # noqa: E402
from core.factors import InvariantDirection, Placement, SemiEuclideanFactor, WarpedCandidate  # noqa: E402
from core.profiles import Profile, exp  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def flat():
    return gallery("flat")


@pytest.fixture
def null_base():
    return gallery("1.5")


@pytest.fixture
def null_fiber():
    return gallery("1.8", {"variant": "theta-free"})


@pytest.fixture
def null_fiber_printed():
    return gallery("1.8")


@pytest.fixture
def unit_base():
    return gallery("1.9")


@pytest.fixture
def power_law():
    return gallery("1.10")


def smooth_candidate(seed: int, null: bool) -> WarpedCandidate:
    """Random positive profiles on a 3 x 2 product with a conformal fiber."""
    r = np.random.default_rng(seed)
    a1, a2, b1, b2, c1 = (float(v) for v in r.uniform(-0.6, 0.6, 5))
    xi, zeta = Profile.identity("xi"), Profile.identity("zeta")
    if null:
        base = SemiEuclideanFactor.lorentzian(3)
        alpha = InvariantDirection((1.0, 1.0, 0.0), base)
    else:
        base = SemiEuclideanFactor.euclidean(3)
        alpha = InvariantDirection((0.6, 0.8, 0.0), base)
    fiber = SemiEuclideanFactor.euclidean(2)
    beta = InvariantDirection((1.0, 0.0), fiber)
    return WarpedCandidate(
        base=base,
        alpha=alpha,
        phi=exp(a1 * xi + 0.1 * a2 * xi ** 2),
        fiber=fiber,
        beta=beta,
        tau=exp(c1 * zeta) + 0.5,
        f=exp(b1 * xi) + 0.25 * b2 ** 2,
        h=a2 * xi ** 2,
        u=b1 * zeta,
        u_placement=Placement.FIBER,
        theta=1.0,
        label=f"smooth-{seed}",
    )


@pytest.fixture(params=[(1, True), (2, False), (3, True)], ids=["null-1", "unit-2", "null-3"])
def smooth(request):
    return smooth_candidate(*request.param)


@pytest.fixture
def riemannian():
    return smooth_candidate(2, False)
