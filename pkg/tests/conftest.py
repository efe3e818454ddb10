import os

import hypothesis
import numpy as np
import pytest

from heat_potentials.soe import generate_soe_table

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session")
def table12():
    return generate_soe_table(12)


@pytest.fixture(scope="session")
def table16():
    return generate_soe_table(16)
