import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture
def data():
    return lambda name: str(ROOT / "data" / name)


@pytest.fixture
def read(data):
    return lambda name: pathlib.Path(data(name)).read_text()


@pytest.fixture(scope="session")
def schema():
    import json

    return json.loads((ROOT / "schema" / "report.schema.json").read_text())
