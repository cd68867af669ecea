import mpmath as mp
import pytest

from ipdhyp.kernel import DEFAULT_DIGITS


@pytest.fixture(autouse=True)
def fixed_precision():
    """Every test starts from the default 40-digit context."""
    saved = mp.mp.dps
    mp.mp.dps = DEFAULT_DIGITS
    yield
    mp.mp.dps = saved


def approx_zero(value, tol="1e-30"):
    return abs(value) <= mp.mpf(tol)


def rel_close(a, b, tol="1e-30"):
    return abs(a - b) / max(1, abs(b)) <= mp.mpf(tol)
