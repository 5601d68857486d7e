import numpy as np
import pytest

from ibpsr import Image, generate_lr_set, quarter_shift_models


def natural_256():
    """256x256 grayscale photograph (scikit-image 'camera', 2x2 box-averaged)."""
    data = pytest.importorskip("skimage.data")
    a = data.camera().astype(np.float64)
    return Image(a.reshape(256, 2, 256, 2).mean(axis=(1, 3)))


@pytest.fixture(scope="session")
def natural():
    return natural_256()


@pytest.fixture(scope="session")
def natural_frames(natural):
    return generate_lr_set(natural, quarter_shift_models())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
