import numpy as np
import pytest
from hypothesis import settings

from cotsums import equidist, gseries

settings.register_profile("suite", deadline=None, derandomize=True, max_examples=50)
settings.load_profile("suite")

SCAN_MODULI = (1009, 2003, 5003, 10007)


@pytest.fixture(scope="session")
def emp_f14():
    # the reference distribution the scans are compared against
    return gseries.empirical_F(gseries.TruncatedGSeries(14), 100_000)


@pytest.fixture(scope="session")
def scan_reports(emp_f14):
    return {
        b: equidist.scan(
            equidist.ScanWindow(b, 0.6, 0.8),
            3,
            reference=emp_f14,
            deterministic=True,
        )
        for b in SCAN_MODULI
    }


@pytest.fixture(scope="session")
def hk14():
    return gseries.hk_table(6, gseries.TruncatedGSeries(14), 20011)


@pytest.fixture(scope="session")
def l2_pair():
    # both evaluators on the same randomly rotated 10^4-point grid
    u0 = np.random.default_rng(20260819).random()
    n = 10_000
    fs = gseries._f_offset_grid(n, u0, 20)
    gs = gseries._fourier_offset_grid(n, u0, 1 << 20)
    return fs, gs
