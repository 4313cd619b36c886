import numpy as np
import pytest

from ods import DecoherenceRates, DriveParams, RampSchedule


@pytest.fixture
def params_a():
    """Strong-drive reference configuration (omega = 2)."""
    return DriveParams.fig2("a")


@pytest.fixture
def schedule_a(params_a):
    return RampSchedule.for_params(params_a)


@pytest.fixture
def reference_rates():
    return DecoherenceRates.reference()


@pytest.fixture
def rho_ground():
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def random_ods_params(rng):
    """One random ODS-valid parameter draw."""
    return DriveParams.ods(
        omega12=rng.uniform(0.05, 3.0),
        omega34=rng.uniform(0.05, 3.0),
        delta=rng.uniform(0.005, 0.5) * rng.choice([-1.0, 1.0]),
        big_delta=rng.uniform(-1.0, 1.0),
        phi12=rng.uniform(-np.pi, np.pi),
        phi34=rng.uniform(-np.pi, np.pi),
    )
