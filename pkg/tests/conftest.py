import numpy as np
import pytest

from pauliflux.domain import label_from_mask


def two_hole_mask(n=48):
    """Disk with two round holes on the horizontal axis, as a boolean node mask."""
    y, x = np.mgrid[0:n, 0:n]
    c = (n - 1) / 2
    s = n / 48
    mask = (x - c) ** 2 + (y - c) ** 2 < (0.48 * n) ** 2
    mask &= (x - c + 10 * s) ** 2 + (y - c) ** 2 >= (5 * s) ** 2
    mask &= (x - c - 10 * s) ** 2 + (y - c) ** 2 >= (5 * s) ** 2
    return mask


@pytest.fixture(scope="session")
def two_hole_domain():
    n = 48
    return label_from_mask(two_hole_mask(n), origin=(-1.0, -1.0), spacing=2.0 / n)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
