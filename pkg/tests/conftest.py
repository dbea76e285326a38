import pytest

from lefschetz.leray import LerayStructure
from lefschetz.models import blowup_model, builtin_pencils

PENCIL_NAMES = ("hyperplane-p3", "quadric-p3", "triple-p1")


@pytest.fixture(scope="session")
def pencils():
    return {p.name: p for p in builtin_pencils()}


@pytest.fixture(scope="session")
def blowups(pencils):
    return {name: blowup_model(p) for name, p in pencils.items()}


@pytest.fixture(scope="session")
def structures(blowups):
    return {name: LerayStructure(b) for name, b in blowups.items()}
