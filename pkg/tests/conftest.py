import orjson
import pytest
from typer.testing import CliRunner

from app.config import settings
from app.models.permutation import ColoredPermutation
from app.services.permutation_service import permutation_service


def window(text: str, r: int = 2) -> ColoredPermutation:
    return permutation_service.parse_window(text, r)


def signed_words(elements):
    return {p.signed for p in elements}


@pytest.fixture(autouse=True)
def serial_settings(monkeypatch):
    """Keep CLI runs in-process unless a test asks for workers"""
    monkeypatch.setattr(settings, "jobs", 1)
    monkeypatch.setattr(settings, "max_degree", 8)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def restriction_file(tmp_path):
    """Write a restriction array to a JSON file and return its path"""

    def write(data, name="restriction.json"):
        path = tmp_path / name
        path.write_bytes(orjson.dumps(data))
        return path

    return write
