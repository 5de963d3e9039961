from __future__ import annotations

import numpy as np
import pytest

import chainobs as co


def build_system(c_p, variant="odd-harmonics", omega0=1.0, n=5, seed=None):
    """Construct (plant, chain, augmented system) in one call."""
    plant = co.PlantSpec.static_plant(np.asarray(c_p, dtype=float))
    scheme = co.ParameterScheme(variant=variant, omega0=omega0, seed=seed)
    chain = co.build_chain(plant, co.make_mu_schedule(scheme, n))
    aug = co.assemble_augmented(plant, chain)
    return plant, chain, aug


@pytest.fixture(scope="session")
def example_system():
    """The five-element reference configuration used throughout the tests."""
    return build_system([1.0, 0.0], "odd-harmonics", 1.0, 5)


@pytest.fixture
def make_system():
    return build_system
