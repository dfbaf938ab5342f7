import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from collatz_lab.residue import ArithClass, ClassUnion

settings.register_profile("lab", deadline=None)
settings.load_profile("lab")

# divisors of 720 keep lcm-lifted residue sets small
DIVISORS_720 = [d for d in range(1, 721) if 720 % d == 0]


@st.composite
def arith_classes(draw, moduli=DIVISORS_720):
    m = draw(st.sampled_from(moduli))
    return ArithClass(draw(st.integers(0, 3 * m)), m)


@st.composite
def class_unions(draw, max_classes=5):
    return ClassUnion.of(*draw(st.lists(arith_classes(), min_size=0, max_size=max_classes)))


def random_union(rng: random.Random, max_classes: int = 5) -> ClassUnion:
    classes = []
    for _ in range(rng.randint(1, max_classes)):
        m = rng.choice(DIVISORS_720)
        classes.append(ArithClass(rng.randrange(3 * m), m))
    return ClassUnion.of(*classes)


def collatz(w: int) -> int:
    return w // 2 if w % 2 == 0 else 3 * w + 1


def iterate_plain(k: int, n: int) -> int:
    for _ in range(n):
        k = collatz(k)
    return k


@pytest.fixture
def rng():
    return random.Random(20261018)


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
