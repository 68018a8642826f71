import json
import os
import subprocess
import sys


def run_probe(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("SOLVER_BACKEND", None)
    else:
        env["SOLVER_BACKEND"] = env_value
    code = (
        "import json, numpy as np\n"
        "from qgpe.backend import BACKEND, kernels\n"
        "state = kernels.ansatz_forward(4, 3, np.linspace(0.1, 2.0, 32))\n"
        "print(json.dumps({'backend': BACKEND, 'fingerprint': [state[0].real, state[0].imag]}))\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_default_backend_is_numba():
    assert run_probe(None)["backend"] == "numba"


def test_env_flag_selects_numpy():
    assert run_probe("numpy")["backend"] == "numpy"


def test_backends_agree_numerically():
    a = run_probe("numba")
    b = run_probe("numpy")
    assert abs(a["fingerprint"][0] - b["fingerprint"][0]) < 1e-14
    assert abs(a["fingerprint"][1] - b["fingerprint"][1]) < 1e-14


def test_invalid_backend_rejected():
    env = dict(os.environ)
    env["SOLVER_BACKEND"] = "fortran"
    out = subprocess.run(
        [sys.executable, "-c", "import qgpe.backend"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.returncode != 0
    assert "SOLVER_BACKEND" in out.stderr
