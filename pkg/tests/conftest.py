import json
from pathlib import Path

import pytest
from hypothesis import settings

GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def golden():
    return lambda name: json.loads((GOLDEN / name).read_text())


@pytest.fixture(params=["compiled", "python"])
def backend(request, monkeypatch):
    from fppmorse.search import _ckernel

    if request.param == "compiled" and _ckernel is None:
        pytest.skip("compiled kernel not built")
    monkeypatch.setenv("FPP_BACKEND", request.param)
    return request.param
