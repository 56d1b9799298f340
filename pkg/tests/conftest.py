import random
import sys

import pytest

from fduality.exact_linalg import column_permutation
from fduality.ftv_core import FramedToricVariety
from fduality.varieties import hirzebruch, projective_space


def to_reference_order(em, reference_fan, computed_fan):
    """Re-index the variables of ``em`` so they follow the columns of ``reference_fan``."""
    perm = column_permutation(reference_fan, computed_fan)
    assert perm is not None, "fan matrices differ beyond a column permutation"
    return em.permuted(perm)


def calibration_corpus(count=240, seed=7, top=6):
    """Random strictly positive framings on P^2, P^3 and P^1 x P^1 (no repeats)."""
    fans = {"P2": projective_space(2), "P3": projective_space(3), "F0": hirzebruch(0)}
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < count:
        name = rng.choice(sorted(fans))
        V = fans[name]
        a = tuple(rng.randint(1, top) for _ in V[0])
        if (name, a) in seen:
            continue
        seen.add((name, a))
        out.append((name, V, a))
    return out


@pytest.fixture
def p2():
    return projective_space(2)


@pytest.fixture
def ex42(p2):
    return FramedToricVariety(p2, (1, 1, 2))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
