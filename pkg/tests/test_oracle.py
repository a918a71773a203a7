import importlib.util
from pathlib import Path

import pytest

pytest.importorskip("sympy")


def test_frozen_values_match_oracle_script(frozen):
    path = Path(__file__).resolve().parent / "oracles" / "derive.py"
    spec = importlib.util.spec_from_file_location("derive", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    assert module.derive() == frozen
