import numpy as np
import pytest
from hypothesis import strategies as st

from crimedyn import analysis
from crimedyn.experiments import BACKWARD_DEMO, FIG2, TABLE3, TABLE4
from crimedyn.model import ModelParams

ACCEPTANCE_LINES: list[str] = []


def random_params(rng: np.random.Generator, regime_mix: bool = True) -> ModelParams:
    """An admissible parameter set; ``beta`` is placed so R0 spans (0.05, 3)."""
    base = ModelParams(
        pi=float(10 ** rng.uniform(2.5, 5)),
        mu=float(rng.uniform(0.005, 0.1)),
        theta=float(rng.uniform(0.005, 1.0)),
        epsilon=float(rng.uniform(0.005, 1.0)),
        sigma=float(rng.uniform(0.02, 1.0)),
        beta=1e-6,
        alpha=1e-6,
        gamma=float(rng.uniform(0.01, 1.0)),
        p=float(rng.uniform(0.01, 0.99)),
        q=float(rng.uniform(0.01, 0.99)),
    )
    a_c = analysis.alpha_star_corrected(base)
    # half the draws above the imitation threshold so every regime is visited
    alpha = a_c * float(10 ** rng.uniform(0.05, 2.0)) if (regime_mix and rng.random() < 0.5) else a_c * float(
        10 ** rng.uniform(-3.0, -0.05)
    )
    base = base.replace(alpha=alpha)
    target = float(10 ** rng.uniform(np.log10(0.05), np.log10(3.0)))
    return base.replace(beta=target * analysis.beta_star(base))


@st.composite
def admissible_params(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_params(np.random.default_rng(seed))


@pytest.fixture
def table3():
    return TABLE3.params


@pytest.fixture
def table4():
    return TABLE4.params


@pytest.fixture
def fig2():
    return FIG2.params


@pytest.fixture
def demo():
    return BACKWARD_DEMO.params


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
