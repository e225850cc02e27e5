"""Shared fixtures: the cached 4-MAC x 10-seed sweep and the acceptance report.

The acceptance tests all consume the same 40 default-scenario runs, so they
are executed once per session and cached. Each test records a one-line
verdict that is printed in the terminal summary regardless of capture mode.
"""

import time

import pytest

from exhaustsim.engine import Simulation
from exhaustsim.scenario import Scenario

MACS = ("802.11", "802.15.4", "smac", "tdma")
SEEDS = tuple(range(1, 11))

_ACCEPTANCE = {}


def check(criterion, passed, detail):
    """Record a criterion verdict for the terminal summary, then assert it."""
    _ACCEPTANCE[criterion] = (bool(passed), detail)
    assert passed, f"{criterion}: {detail}"


@pytest.fixture(scope="session")
def sweeps():
    """{mac: [run, ...]} where run = {'sim', 'summary', 'runtime'} per seed."""
    out = {}
    for mac in MACS:
        runs = []
        for seed in SEEDS:
            sim = Simulation(Scenario(mac=mac), seed)
            t0 = time.perf_counter()
            summary = sim.run()
            runs.append({"sim": sim, "summary": summary, "seed": seed,
                         "runtime": time.perf_counter() - t0})
        out[mac] = runs
    return out


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[criterion]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{criterion}: {status} - {detail}")
