"""Shared fixtures: the default operating point and its derived quantities"""

import pytest

from entanglement_simulator import EntanglementSimulator, RunConfig
from graphene_material import GrapheneParams, chemical_potential
from moment_dynamics import build_system, initial_state


@pytest.fixture(scope='session')
def simulator():
    return EntanglementSimulator()


@pytest.fixture(scope='session')
def default_config():
    return RunConfig()


@pytest.fixture(scope='session')
def default_params():
    return GrapheneParams()


@pytest.fixture(scope='session')
def default_mu(default_params):
    return chemical_potential(default_params)


@pytest.fixture(scope='session')
def default_setup(simulator, default_config):
    return simulator.prepare(default_config)


@pytest.fixture(scope='session')
def default_system(default_setup):
    return build_system(default_setup.system_params), initial_state(default_setup.system_params)


@pytest.fixture(scope='session')
def default_result(simulator, default_config):
    return simulator.run_single(default_config)
