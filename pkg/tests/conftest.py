import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from oblix import oblique
from oblix.exceptions import DegenerateAngle

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

PTAK_ATOL = 1e-8


class ProjectionAudit:
    """Norm-versus-angle check applied to every projection built during the run."""

    def __init__(self):
        self.checked = 0
        self.skipped = 0
        self.out_of_domain = []
        self.worst = 0.0
        self.failures = []

    def record(self, P):
        if P.range.dim == 0:
            self.skipped += 1
            return
        norm = P.norm()
        try:
            predicted = oblique.ljance_ptak_norm(P)
        except DegenerateAngle as exc:
            # Outside the formula's contract (c0 >= 1 - 1e-12); nothing to compare.
            self.out_of_domain.append((norm, str(exc)))
            return
        gap = abs(norm - predicted)
        self.checked += 1
        self.worst = max(self.worst, gap)
        if not gap <= PTAK_ATOL:
            self.failures.append((norm, predicted))


AUDIT = ProjectionAudit()
_original_init = oblique.ObliqueProjection.__init__


def _audited_init(self, matrix, range, nullsp):
    _original_init(self, matrix, range, nullsp)
    AUDIT.record(self)


oblique.ObliqueProjection.__init__ = _audited_init

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.addinivalue_line("markers", "audit_last: run after every other test")


def pytest_collection_modifyitems(session, config, items):
    # The projection audit must see everything else first.
    last = [it for it in items if it.get_closest_marker("audit_last")]
    rest = [it for it in items if not it.get_closest_marker("audit_last")]
    items[:] = rest + last


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    if report.when == "call" or report.failed:
        ok = report.passed and report.when == "call"
        prev = CRITERIA.get(number[0])
        CRITERIA[number[0]] = (number[1], ok if prev is None else prev[1] and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
    terminalreporter.write_line(
        f"projection audit: {AUDIT.checked} checked, worst gap {AUDIT.worst:.3e}, "
        f"{len(AUDIT.failures)} failures, {len(AUDIT.out_of_domain)} beyond the formula's domain"
    )


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
