import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from antipodes.generators import gen_circle


@pytest.fixture(scope="session")
def big_circle():
    """Shared dense circle instance for the box-count and profile checks."""
    return gen_circle(100_000)
