import math

import numpy as np
import pytest

from fluxion.model import SystemParams

HALF_PI = math.pi / 2


@pytest.fixture
def fig2():
    """Symmetric drive set used for the population and flux-sweep figures."""
    return SystemParams()


@pytest.fixture
def fig4():
    return SystemParams(omega_bg=100.0, omega_cg=1000.0, omega_dg=2000.0)


@pytest.fixture
def undriven():
    return SystemParams(omega_ca=0.0, omega_cb=0.0, omega_da=0.0, omega_db=0.0)


def random_params(rng: np.random.Generator) -> SystemParams:
    return SystemParams(
        omega_ca=rng.uniform(0, 20), omega_cb=rng.uniform(0, 20),
        omega_da=rng.uniform(0, 20), omega_db=rng.uniform(0, 20),
        phi_ca=rng.uniform(-4, 4), phi_cb=rng.uniform(-4, 4),
        phi_da=rng.uniform(-4, 4), phi_db=rng.uniform(-4, 4),
        delta_c=rng.uniform(-80, 80), delta_d=rng.uniform(-80, 80),
        gamma_a=rng.uniform(0.2, 3), gamma_b=rng.uniform(0.2, 3),
        gamma_c=rng.uniform(10, 200), gamma_d=rng.uniform(10, 200),
        omega_ag=rng.uniform(-10, 10), omega_bg=rng.uniform(50, 150),
        omega_cg=rng.uniform(500, 1500), omega_dg=rng.uniform(1500, 2500),
    )


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
