import os
import subprocess
import sys

import numpy as np
import pytest

from pu_oscillator import _kernels_py, kernels
from pu_oscillator.dynamics import decoupled_field, ghost_field
from pu_oscillator.model import validate_params

compiled = pytest.importorskip("pu_oscillator._kernels", reason="compiled kernel not built")


@pytest.mark.parametrize("make", [decoupled_field, ghost_field])
def test_backends_agree(make):
    p = validate_params(1.0, 2.0, 1.0)
    A = np.ascontiguousarray(make(p).matrix)
    y0 = np.array([0.3, -0.2, 0.5, 0.1])
    a, bad_a = _kernels_py.rk4_linear(A, y0, 1e-3, 5000)
    b, bad_b = compiled.rk4_linear(A, y0, 1e-3, 5000)
    assert bad_a == bad_b == -1
    assert np.max(np.abs(np.asarray(b) - a)) <= 1e-12


def test_backends_report_same_blow_up_step():
    p = validate_params(1.0, 2.0, 1.0)
    A = np.ascontiguousarray(decoupled_field(p).matrix)
    y0 = np.array([1.0, 0.0, 1.0, 0.0])
    _, bad_a = _kernels_py.rk4_linear(A, y0, 2.0, 5000)
    _, bad_b = compiled.rk4_linear(A, y0, 2.0, 5000)
    assert bad_a == bad_b > 0


@pytest.mark.skipif(os.environ.get("PU_OSCILLATOR_PURE") == "1", reason="fallback forced")
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "cython"


def test_env_forces_fallback():
    env = dict(os.environ, PU_OSCILLATOR_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import pu_oscillator; print(pu_oscillator.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
