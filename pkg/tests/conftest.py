import time

import pytest

from hapsris.harness import SweepSpec, run_sweep
from hapsris.scenario import generate_scenario

FIG2_VALUES = (389120, 454656, 520192, 585728, 651264, 716800)
PA_VALUES = (25.0, 28.0, 31.0, 34.0, 37.0, 40.0, 43.0)
ACTIVE_SCHEMES = ("I", "II", "III", "IV")
ALL_SCHEMES = ACTIVE_SCHEMES + ("passive",)

_acceptance_lines: list[str] = []


def record_criterion(name: str, ok: bool) -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}: {name}")
    assert ok, f"acceptance criterion failed: {name}"


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def default_scenario():
    return generate_scenario()


@pytest.fixture(scope="session")
def element_sweep():
    """Default element sweep (all five schemes) plus its wall-clock time."""
    sc = generate_scenario()
    sw = SweepSpec(variable="n_total", values=FIG2_VALUES, schemes=ALL_SCHEMES, seed=sc.seed)
    start = time.perf_counter()
    results = run_sweep(sc, sw)
    elapsed = time.perf_counter() - start
    return results, elapsed


@pytest.fixture(scope="session")
def pa_sweep():
    """Amplifier-power sweep at the baseline element count, active schemes."""
    sc = generate_scenario()
    sw = SweepSpec(variable="pa_power", values=PA_VALUES, schemes=ACTIVE_SCHEMES, seed=sc.seed)
    return run_sweep(sc, sw)
