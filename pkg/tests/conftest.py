import pytest

from sldensity import _pykernels

try:
    from sldensity import _kernels
    BACKENDS = [_kernels, _pykernels]
except ImportError:  # extension not built
    BACKENDS = [_pykernels]


@pytest.fixture(params=BACKENDS, ids=lambda b: b.BACKEND)
def backend(request):
    return request.param
