import math
import time

import pytest

from apfripple.model import BeamParameters, FilmParameters

# measured stress, film thickness and surface energy for Ar+ on Si at 250 eV
STRESS = 1.5e9
H0 = 3e-9
GAMMA = 1.36


@pytest.fixture
def film():
    # fA = 1/s so that eta * fA reproduces the measured stress
    return FilmParameters(viscosity=STRESS / 6.0, surface_energy=GAMMA, thickness=H0)


@pytest.fixture
def beam():
    return BeamParameters(flux=1.0, strain_per_ion=1.0, theta=math.radians(60))


# acceptance criteria outcomes, printed in the terminal summary
ACCEPTANCE = []
SUITE_BUDGET_S = 60.0


def pytest_sessionstart(session):
    session.config._apf_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    elapsed = time.perf_counter() - config._apf_t0
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
        tr.write_line(line)
    ok = elapsed < SUITE_BUDGET_S
    tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion 10: session runtime {elapsed:.1f} s "
                  f"(budget {SUITE_BUDGET_S:.0f} s)")
