import random

import pytest
from hypothesis import strategies as st

from lgcalc.syntax import BINARY_OPS, UNARY_OPS, Atom, Bin, Un

CPS_BINARY = ("over", "under", "rdiff", "ldiff")


def random_formula(rng: random.Random, depth: int, binary=BINARY_OPS, atoms="pq"):
    if depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(atoms))
    if rng.random() < 0.4:
        return Un(rng.choice(UNARY_OPS), random_formula(rng, depth - 1, binary, atoms))
    return Bin(rng.choice(binary), random_formula(rng, depth - 1, binary, atoms),
               random_formula(rng, depth - 1, binary, atoms))


def formulas(max_depth: int = 4, binary=BINARY_OPS):
    base = st.sampled_from(["p", "q", "n", "np", "s"]).map(Atom)

    def extend(children):
        return st.one_of(
            st.builds(Un, st.sampled_from(UNARY_OPS), children),
            st.builds(Bin, st.sampled_from(binary), children, children),
        )

    return st.recursive(base, extend, max_leaves=2 ** max_depth)


@pytest.fixture(scope="session")
def lexicon():
    from lgcalc.semantics import paper_lexicon
    return paper_lexicon()


# one PASS/FAIL line per acceptance criterion in the terminal summary
_CRITERIA: dict[str, list] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::test_criterion_", 1)[1].split("[", 1)[0]
        num = name.split("_", 1)[0]
        notes = [v for k, v in report.user_properties if k == "note"]
        entry = _CRITERIA.setdefault(num, [True, name, []])
        entry[0] = entry[0] and report.outcome == "passed"
        entry[2].extend(notes)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA, key=int):
        ok, name, notes = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num} ({name.split('_', 1)[1]}): {'PASS' if ok else 'FAIL'}")
        for n in notes:
            terminalreporter.write_line(f"    {n}")
