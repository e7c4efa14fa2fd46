from pathlib import Path

import pytest

from adaptqsci.chemistry import load_fcidump_system

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def h4_system():
    return load_fcidump_system(FIXTURE_DIR / "h4_sto3g_1.0A.fcidump")


@pytest.fixture(scope="session")
def h6_system():
    return load_fcidump_system(FIXTURE_DIR / "h6_sto3g_1.0A.fcidump")


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR
