import json
from fractions import Fraction
from pathlib import Path

import pytest

ORACLE_DIR = Path(__file__).resolve().parent / "oracles"


@pytest.fixture(scope="session")
def frozen():
    return json.loads((ORACLE_DIR / "frozen.json").read_text())


def F(text) -> Fraction:
    return Fraction(text)
