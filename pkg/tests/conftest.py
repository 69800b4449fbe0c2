import pytest

from wreathnorm.groups import builtin_group
from wreathnorm.norms import conjugacy_closure, word_norm_bfs


@pytest.fixture(scope="session")
def a5():
    return builtin_group("A5")


@pytest.fixture(scope="session")
def s3():
    return builtin_group("S3")


@pytest.fixture(scope="session")
def s4():
    return builtin_group("S4")


@pytest.fixture(scope="session")
def a4():
    return builtin_group("A4")


@pytest.fixture(scope="session")
def z3():
    return builtin_group("Z3")


@pytest.fixture(scope="session")
def s3_word_table(s3):
    gens = conjugacy_closure(s3, [s3.index[g] for g in s3.generators])
    return word_norm_bfs(s3, gens)


@pytest.fixture(scope="session")
def a5_word_table(a5):
    gens = conjugacy_closure(a5, [a5.index[g] for g in a5.generators])
    return word_norm_bfs(a5, gens)
