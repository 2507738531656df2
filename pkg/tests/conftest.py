import numpy as np
import pytest

from mcsf import Image, use_backend

ACCEPTANCE_LINES = []


def natural_image(name, size=256, offset=(0, 0)):
    """A size x size RGB crop of one of scikit-image's bundled photographs."""
    from skimage import data

    arr = getattr(data, name)()
    y, x = offset
    crop = arr[y:y + size, x:x + size, :3]
    assert crop.shape[:2] == (size, size)
    return Image.from_interleaved(crop)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    with use_backend(request.param):
        yield request.param


def random_image(rng, d, h, w, lo=0.0, hi=255.0):
    return Image(rng.uniform(lo, hi, size=(d, h, w)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
