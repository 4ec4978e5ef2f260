import sys
from pathlib import Path

import hypothesis
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cstgl.data import synth_dataset  # noqa: E402

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def synth():
    """The c=3, 30-per-cluster, 3-view, d=20, sigma=0.2 blob dataset."""
    return synth_dataset(30, 3, 3, 20, 0.2, seed=0)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = item.get_closest_marker("criterion")
    if criterion is None or report.when != "call":
        return
    detail = dict(report.user_properties).get("detail", "")
    _acceptance.append((criterion.args[0], criterion.args[1], report.outcome.upper(), detail))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, detail in sorted(_acceptance):
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{verdict} [{number:2d}] {title}: {detail}")
