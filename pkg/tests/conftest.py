import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from auxest import Population, PopulationSummary, SynthesisTarget, synthesize_population

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def small_pop():
    """Twelve units with y, x and a 0/1 attribute."""
    y = np.array([3.1, 4.7, 2.2, 8.9, 5.5, 6.1, 7.3, 1.9, 4.4, 9.8, 6.6, 5.0])
    x = np.array([2.0, 3.9, 1.7, 7.5, 4.1, 5.2, 6.8, 1.1, 3.3, 8.7, 5.9, 4.6])
    phi = np.array([0, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0], dtype=float)
    return Population(y, x, phi)


@pytest.fixture(scope="session")
def synthetic_pop():
    return synthesize_population(
        SynthesisTarget(N=2000, Ybar=40.0, Cy=0.5, Cx=0.4, rho=0.8, Cp=1.2, rho_pb=0.5), seed=3)


@pytest.fixture(scope="session")
def ch1_summary():
    return PopulationSummary.from_scalars(N=89, Ybar=3.36, P=0.1236, rho_pb=0.766, Cy=0.604,
                                          Cp=2.19, beta2phi=6.23181)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Record one verdict line per acceptance criterion; printed again at the end of the run."""

    def record(number, title, checks):
        ok = all(c[-1] for c in checks)
        show = lambda v: f"{v:.6g}" if isinstance(v, float) else str(v)
        parts = [f"{name}={show(value)} (target {show(target)}, tol {tol})"
                 for name, value, target, tol, _ in checks]
        failed = [c[0] for c in checks if not c[-1]]
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: " + "; ".join(parts)
        if failed:
            line += f"  [failed: {', '.join(failed)}]"
        ACCEPTANCE_LINES.append(line)
        print("\n" + line)
        return ok, failed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: (s.startswith("info"), s)):
            terminalreporter.write_line(line)
