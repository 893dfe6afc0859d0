import numpy as np
import pytest

from qrough import FrameBuffer

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_frame(rng, h=8, w=8, levels=None):
    """Random frame; ``levels`` restricts channel values to a small palette."""
    if levels is None:
        px = rng.integers(0, 256, (h, w, 3))
    else:
        px = rng.choice(np.asarray(levels), (h, w, 3))
    return FrameBuffer(px.astype(np.uint8))
