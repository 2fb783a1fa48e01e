import itertools

import pytest

from bdris.graph_core import make_graph

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def _report(name, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_graph(rng, n, p):
    return make_graph(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < p])


def assert_valid_witness(g, witness):
    """Check branch sets are disjoint, connected in g, and realise K5 / K3,3."""
    sets = [set(s) for s in witness.branch_sets]
    assert all(sets)
    assert sum(len(s) for s in sets) == len(set().union(*sets))
    adj = g.adjacency()
    for s in sets:
        start = next(iter(s))
        seen, todo = {start}, [start]
        while todo:
            x = todo.pop()
            for y in adj[x] & s:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        assert seen == s, f"branch set {s} is not connected"

    def touching(a, b):
        return any(y in b for x in a for y in adj[x])

    if witness.kind == "K5":
        assert len(sets) == 5
        pairs = itertools.combinations(range(5), 2)
    else:
        assert witness.kind == "K3,3" and len(sets) == 6
        pairs = ((i, j) for i in range(3) for j in range(3, 6))
    for i, j in pairs:
        assert touching(sets[i], sets[j]), f"branch sets {i} and {j} not adjacent"
