import pytest
from hypothesis import HealthCheck, settings

from polarlist.construct import crc_polar, design, ebch_polar, lwb_preset, select_frozen
from polarlist.crc import koopman_to_poly
from polarlist.galois import ebch_parity_check

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def rel128():
    return design(128, 64, 4.0)


@pytest.fixture(scope="session")
def polar128(rel128):
    return select_frozen(rel128, 64)


@pytest.fixture(scope="session")
def ebch99(rel128):
    return ebch_polar(rel128, 64, ebch_parity_check(7, 99))


@pytest.fixture(scope="session")
def ebch85(rel128):
    return ebch_polar(rel128, 64, ebch_parity_check(7, 85))


@pytest.fixture(scope="session")
def lwb7(rel128):
    return lwb_preset(rel128, "paper-128-64")


@pytest.fixture(scope="session")
def crc18(rel128):
    return crc_polar(rel128, 64, koopman_to_poly(0x18))


@pytest.fixture(scope="session")
def codes128(polar128, ebch99, lwb7, crc18):
    return {"polar": polar128, "ebch": ebch99, "lwb": lwb7, "crc": crc18}


def pytest_terminal_summary(terminalreporter):
    from oracles import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: int(c[1:])):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{cid:<4} {'PASS' if ok else 'FAIL'}  {detail}")
