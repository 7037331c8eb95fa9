import pytest

from twistlab.action import default_action
from twistlab.ring import RingContext
from twistlab.tower import TowerConfig, build_tower


@pytest.fixture(scope="session")
def tower223():
    return build_tower(TowerConfig(2, 2, 3))


@pytest.fixture(scope="session")
def action_n1():
    return default_action(1, 2)


@pytest.fixture(scope="session")
def action_n2():
    return default_action(2, 2)


@pytest.fixture(scope="session")
def ctx_n2_k1(tower223, action_n2):
    return RingContext(tower223, action_n2, 1)


@pytest.fixture(scope="session")
def ctx_n2_k2(tower223, action_n2):
    return RingContext(tower223, action_n2, 2)


@pytest.fixture(scope="session")
def ctx_n1_k1(tower223, action_n1):
    return RingContext(tower223, action_n1, 1)
