import numpy as np
import pytest

from vilenkin import _backend
from vilenkin.group import build_basis, parse_basis
from vilenkin.transform import CylinderFunction

TEST_BASES = ["dyadic:8", "triadic:6", "mixed:2,3,2,3,2,3"]
SMALL_BASES = ["mixed:2,3", "mixed:2,3,2", "mixed:3,3,3", "dyadic:4", "mixed:5,2,3"]

BACKENDS = ["python"] + (["compiled"] if _backend.compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(params=SMALL_BASES)
def small_basis(request):
    return parse_basis(request.param)


def random_function(basis, seed, complex_=True):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(basis.size)
    if complex_:
        vals = vals + 1j * rng.standard_normal(basis.size)
    return CylinderFunction(vals, basis)


def basis_of(radices):
    return build_basis(radices)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        passed, detail = results[k]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {k:2d}: {detail}")
