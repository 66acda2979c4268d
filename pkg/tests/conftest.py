import json
from pathlib import Path

import pytest

from viskop import build_indices, load_kb

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str):
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def borders_path() -> Path:
    return FIXTURES / "borders.json"


@pytest.fixture(scope="session")
def borders_kb(borders_path):
    return load_kb(borders_path)


@pytest.fixture(scope="session")
def borders_idx(borders_kb):
    return build_indices(borders_kb)


@pytest.fixture(scope="session")
def faulty_doc():
    return read_fixture("border_question_faulty.json")


@pytest.fixture(scope="session")
def corrected_doc():
    return read_fixture("border_question_corrected.json")
