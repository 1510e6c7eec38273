import os

import numpy as np
import pytest

from cfc_eeg._kernels import _pykernels

try:
    from cfc_eeg._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def bonn_root():
    return os.environ.get("CFC_EEG_DATA")


requires_bonn = pytest.mark.skipif(
    not bonn_root(), reason="Bonn EEG data not available (set CFC_EEG_DATA)")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for status, label, detail in results:
        terminalreporter.write_line(f"[{status}] {label}: {detail}")
