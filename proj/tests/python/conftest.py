import os
import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def oracles():
    import json

    with open(FIXTURES.parent / "oracles" / "oracles.json") as f:
        return json.load(f)
