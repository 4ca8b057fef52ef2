import numpy as np
import pytest

from gcgames import fimo, synthesis


@pytest.fixture(scope="session")
def baseline_params():
    return fimo.MacroParams()


@pytest.fixture(scope="session")
def baseline_model(baseline_params):
    return fimo.build_canonical(baseline_params)


@pytest.fixture(scope="session")
def example_x0():
    return np.array([-0.04, 0.175])


@pytest.fixture(scope="session")
def reference_solution(baseline_model, example_x0):
    """Default-profile solution of the baseline model, shared across tests."""
    return synthesis.synthesize(baseline_model, example_x0,
                                synthesis.SynthesisOptions())


@pytest.fixture(scope="session")
def tight_solution(baseline_model, example_x0):
    """Cost-minimizing-profile solution of the baseline model."""
    return synthesis.synthesize(
        baseline_model, example_x0,
        synthesis.SynthesisOptions(certificate_rule="tight"),
    )
