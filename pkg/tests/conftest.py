import pytest

from chargedrop.core import METHANOL, WATER, DropletSpec


@pytest.fixture(scope="session")
def water_spec():
    """Water benchmark drop: R = 10 um, sigma = 0.073 N/m, Q = Q_R/2."""
    return DropletSpec.from_charge_fraction(10e-6, WATER, 0.5)


@pytest.fixture(scope="session")
def methanol_spec():
    """Methanol drop: R = 100 nm, sigma = 0.023 N/m, Q = Q_R/2."""
    return DropletSpec.from_charge_fraction(100e-9, METHANOL, 0.5)
