from __future__ import annotations

import time
from dataclasses import replace

import pytest

from barqa.pipeline import generate
from barqa.sampler import GeneratorConfig, load_vocabulary

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def vocab():
    return load_vocabulary()


@pytest.fixture(scope="session")
def config():
    return GeneratorConfig()


@pytest.fixture(scope="session")
def small_config():
    return replace(GeneratorConfig(), train_count=40, test_familiar_count=12, test_novel_count=12)


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory, small_config):
    out = tmp_path_factory.mktemp("small") / "ds"
    manifest = generate(small_config, out)
    return out, manifest


@pytest.fixture(scope="session")
def desk_dataset(tmp_path_factory):
    """Desk-scale run (1000/250/250) with its wall time."""
    out = tmp_path_factory.mktemp("desk") / "ds"
    t0 = time.perf_counter()
    manifest = generate(GeneratorConfig(), out)
    return out, manifest, time.perf_counter() - t0


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
