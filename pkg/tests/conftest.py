import pytest

from arraymatch.graph import ArrayGraph
from arraymatch.mcim import MCIM

_criteria: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance criterion verdict for the end-of-run summary."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        _criteria[number] = (title, bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok, detail = _criteria[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))


def identity_graph(n: int) -> ArrayGraph:
    g = ArrayGraph()
    for i in range(n):
        g.add_equation(f"e{i}")
        g.add_variable(f"v{i}")
        g.add_arc(f"e{i}", f"v{i}", MCIM.from_entries((1,), (1,), [((1,), (1,))]))
    return g
