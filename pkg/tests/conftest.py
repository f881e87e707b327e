import pytest

from accordion_gripper import (
    ChamberGeometry,
    GripperAssembly,
    HyperelasticMaterial,
    SolverBox,
)
from accordion_gripper.config import ModelContext, load_config


@pytest.fixture(scope="session")
def geom():
    return ChamberGeometry()


@pytest.fixture(scope="session")
def mat():
    return HyperelasticMaterial()


@pytest.fixture(scope="session")
def box():
    return SolverBox()


@pytest.fixture(scope="session")
def assembly(geom, mat):
    return GripperAssembly(geometry=geom, material=mat)


@pytest.fixture(scope="session")
def ctx():
    return ModelContext.from_config(load_config())
