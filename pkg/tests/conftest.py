import random

import pytest

from wreathfpp.permgroup import parse_perm_list, perm_set, symmetric_group


def group(text, d):
    from wreathfpp.permgroup import generate
    return generate(parse_perm_list(text, d), degree=d)


@pytest.fixture
def sym4():
    return symmetric_group(4)


def random_subset(rng: random.Random, d: int):
    """Uniform random nonempty subset of Sym(d): keep each element with probability 1/2."""
    elems = symmetric_group(d).sorted()
    while True:
        chosen = [g for g in elems if rng.random() < 0.5]
        if chosen:
            return perm_set(chosen, degree=d)
