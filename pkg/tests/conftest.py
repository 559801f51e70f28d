import pathlib

import pytest

from cubecoh.ars import parse_ars
from cubecoh.confluence import Confluence
from cubecoh.contraction import Contraction, fill_square
from cubecoh.polygraph import generate

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def load(name: str):
    return parse_ars((DATA / name).read_text())


def confluence_for(T):
    C = Contraction(T)
    return Confluence(T, fill=lambda S: fill_square(C, S).B)


@pytest.fixture(scope="session")
def golden():
    return load("golden.ars")


@pytest.fixture(scope="session")
def golden_local(golden):
    return generate(golden, 4, "local")


@pytest.fixture(scope="session")
def golden_paths(golden):
    return generate(golden, 3, "paths")
