from pathlib import Path

import pytest

from hyperspec.families import generate
from hyperspec.io import load_hypergraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = _criterion_of(report)
    if n is not None:
        _criteria.setdefault(n, []).append((report.nodeid.split("::")[-1], report.outcome))


def _criterion_of(report):
    for key in report.keywords:
        if key.startswith("criterion_"):
            return int(key.split("_")[1])
    return None


@pytest.hookimpl(tryfirst=True)
def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            name = f"criterion_{mark.args[0]}"
            item.keywords[name] = True
            item.extra_keyword_matches.add(name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        ok = all(o == "passed" for _, o in outcomes)
        names = ", ".join(f"{name}={o}" for name, o in outcomes)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({names})")


@pytest.fixture(scope="session")
def h20():
    return load_hypergraph(FIXTURES / "h20.json")[0]


@pytest.fixture(scope="session")
def h11():
    return load_hypergraph(FIXTURES / "h11.json")[0]


def family_instances():
    """Generated instances covering every family, used by the theorem and bound suites."""
    out = []
    for l in (2, 3, 4):
        for t in (2, 3):
            for w in (1, 2, 3):
                out.append((f"hyperflower-l{l}-t{t}-w{w}", generate("hyperflower", l=l, r=1, t=t, core_sizes=[w])))
    out.append(("hyperflower-l2-r2", generate("hyperflower", l=2, r=2, t=2, core_sizes=[2, 3])))
    for k, s in ((3, 3), (4, 2), (3, 5)):
        out.append((f"sunflower-k{k}-s{s}", generate("sunflower", k=k, s=s)))
    for k, d in ((3, 2), (4, 3)):
        out.append((f"loose_path-k{k}-d{d}", generate("loose_path", k=k, d=d)))
        out.append((f"loose_cycle-k{k}-d{d}", generate("loose_cycle", k=k, d=d)))
    for base in ("path:4", "cycle:5", "star:4"):
        for k in (4, 5):
            out.append((f"power-{base}-k{k}", generate("graph_power", base=base, k=k)))
    for k in (3, 4):
        out.append((f"squid-k{k}", generate("squid", k=k)))
    return out
