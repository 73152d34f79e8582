import numpy as np
import pytest

from rismimo.channel import AnglePair, Scenario
from rismimo.experiments import paper_scenario


@pytest.fixture(scope="session")
def paper_scn() -> Scenario:
    return paper_scenario(seed=1)


@pytest.fixture()
def small_scn() -> Scenario:
    rng = np.random.default_rng(7)
    return Scenario(
        M=4,
        N=4,
        K=2,
        delta=1.3,
        epsilon=np.array([2.0, 0.7]),
        beta=0.8,
        alpha=np.array([1.2, 0.5]),
        p=np.array([1.5, 2.0]),
        sigma2=0.3,
        ris_bs_angles=tuple(rng.uniform(0, 2 * np.pi, 4)),
        user_angles=(
            AnglePair(*rng.uniform(0, 2 * np.pi, 2)),
            AnglePair(*rng.uniform(0, 2 * np.pi, 2)),
        ),
    )


def random_scenario(rng: np.random.Generator, M=None, N=None, K=None, **overrides) -> Scenario:
    """Random synthetic scenario for property tests."""
    M = M if M is not None else int(rng.choice([1, 4, 9, 16]))
    N = N if N is not None else int(rng.choice([1, 4, 9, 16]))
    K = K if K is not None else int(rng.integers(1, 4))
    fields = dict(
        M=M,
        N=N,
        K=K,
        delta=float(rng.uniform(0, 4)),
        epsilon=rng.uniform(0, 8, K),
        beta=float(rng.uniform(0.2, 2.0)),
        alpha=rng.uniform(0.2, 2.0, K),
        p=rng.uniform(0.5, 3.0, K),
        sigma2=float(rng.uniform(0.1, 1.0)),
        ris_bs_angles=tuple(rng.uniform(0, 2 * np.pi, 4)),
        user_angles=tuple(AnglePair(*rng.uniform(0, 2 * np.pi, 2)) for _ in range(K)),
    )
    fields.update(overrides)
    return Scenario(**fields)
