import sys
from pathlib import Path

import pytest

from bddhc import interned

sys.path.insert(0, str(Path(__file__).parent))

KERNELS = interned.available_kernels()


@pytest.fixture(params=KERNELS)
def kernel(request):
    """Every available interned-backend kernel, by name."""
    return request.param


@pytest.fixture
def manager(kernel):
    return interned.new_manager(kernel)
