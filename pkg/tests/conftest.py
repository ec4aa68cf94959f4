import os

import pytest

from vb0.groups import direct_product, from_permutations
from vb0.harness import load_corpus


def cyclic(n):
    gen = "(" + " ".join(str(i) for i in range(1, n + 1)) + ")" if n > 1 else "()"
    return from_permutations(max(n, 1), [gen] if n > 1 else [], label=f"C{n}")


def dihedral(order):
    n = order // 2
    refl = "".join(f"({i} {n + 1 - i})" for i in range(1, n // 2 + 1) if i < n + 1 - i)
    return from_permutations(n, ["(" + " ".join(map(str, range(1, n + 1))) + ")", refl or "()"],
                             label=f"D{order}")


def quaternion():
    return from_permutations(8, ["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"], label="Q8")


def symmetric(n):
    if n == 3:
        return from_permutations(3, ["(1 2)", "(1 2 3)"], label="S3")
    return from_permutations(4, ["(1 2)", "(1 2 3 4)"], label="S4")


def alternating4():
    return from_permutations(4, ["(1 2)(3 4)", "(1 2 3)"], label="A4")


def klein():
    return from_permutations(4, ["(1 2)(3 4)", "(1 3)(2 4)"], label="C2 x C2")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def D8():
    return dihedral(8)


@pytest.fixture
def Q8():
    return quaternion()


@pytest.fixture
def S3():
    return symmetric(3)


@pytest.fixture
def K4():
    return klein()


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def stretch_enabled() -> bool:
    return os.environ.get("VB0_STRETCH", "") not in ("", "0")


def product(a, b):
    return direct_product(a, b)
