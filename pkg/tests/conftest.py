import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from clrspline import build_space  # noqa: E402

MIDPOINTS = np.array([6574, 19591, 32608, 45625, 58641, 71658, 84675, 97692, 110709.0])
CASE_KNOTS = dict(a=0.0, b=110709.0, interior=(30000.0, 70000.0), degree=3)


def random_space(rng, k=None, g=None, a=0.0, b=1.0, min_gap=0.05):
    k = int(rng.integers(1, 5)) if k is None else k
    g = int(rng.integers(0, 6)) if g is None else g
    while True:
        inner = np.sort(rng.uniform(a, b, g))
        pts = np.r_[a, inner, b]
        if g == 0 or np.diff(pts).min() > min_gap * (b - a):
            return build_space(a=a, b=b, interior=tuple(inner), degree=k)


def random_problem(rng, k=None, l=None, dim=None, n=None, alpha=None, length=10.0):
    """Smoothing instance on [0, length] with jittered uniform interior knots.

    On [0, 10] the penalty and data terms have comparable scale for every
    k <= 4, l < k and alpha in [1e-2, 1e2].
    """
    from clrspline import SmoothingProblem
    k = int(rng.integers(2, 5)) if k is None else k
    dim = int(rng.integers(max(4, k + 1), 13)) if dim is None else dim
    g = dim - k - 1
    h = length / (g + 1)
    inner = np.arange(1, g + 1) * h + rng.uniform(-0.25, 0.25, g) * h
    sp = build_space(a=0.0, b=length, interior=tuple(inner), degree=k)
    l = int(rng.integers(1, k)) if l is None else l
    n = dim + int(rng.integers(0, 11)) if n is None else n
    xs = np.sort(rng.uniform(0.0, length, n))
    ys = np.sin(6 * xs / length) + 0.3 * rng.normal(size=n)
    w = rng.uniform(0.5, 2.0, n)
    alpha = 10 ** rng.uniform(-2, 2) if alpha is None else alpha
    return SmoothingProblem(sp, xs, ys, w, alpha, l)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def case_space():
    return build_space(**CASE_KNOTS)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None and rep.when == "call":
        item.config._acceptance[item.nodeid] = (m.args[0], m.args[1], rep.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    grouped = {}
    for nodeid, (num, title, outcome) in results.items():
        grouped.setdefault((num, title), []).append((nodeid.split("::")[-1], outcome))
    terminalreporter.section("acceptance criteria")
    for (num, title), parts in sorted(grouped.items()):
        failed = [name for name, outcome in sorted(parts) if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        detail = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"[{status}] criterion {num}: {title}{detail}")
