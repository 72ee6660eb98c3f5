import random

import pytest

from gkzrank import MonoidModule, NotFullLattice, NotPointed

EXAMPLES = {
    "hidden": [[2, 3, 0, 0, 1, 0, 1], [0, 1, 2, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]],
    "hidden4": [[2, 3, 0, 0, 1, 0, 1, 0, 1, 0, 1], [0, 1, 2, 0, 0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1]],
    "two_lines": [[2, 1, 1, 1, 1, 1, 1, 1], [0, 1, 1, 1, 1, 0, 0, 1], [0, 0, 1, 3, 4, 0, 1, 2],
            [0, 0, 0, 0, 0, 1, 1, 1]],
    "nonconstant": [[2, 3, 2, 2, 0, 0, 0, 0, 2, 5, 3], [0, 0, 0, 0, 2, 3, 2, 2, 2, 3, 5],
             [0, 0, 1, 2, 0, 0, 1, 2, 5, 7, 7]],
    "plane_line": [[2, 3, 0, 0, 0, 0, 0, 1, 0, 1], [0, 0, 2, 3, 0, 1, 0, 0, 1, 1],
             [0, 0, 0, 0, 1, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1, 1, 1]],
    "four_lines": [[2, 3, 0, 0, 1, 0, 1], [0, 0, 2, 3, 0, 1, 1], [0, 0, 0, 0, 1, 1, 1]],
    "intro": [[1, 1, 1, 1], [0, 1, 3, 4]],
}

_MODULES: dict = {}


def module(key: str) -> MonoidModule:
    if key not in _MODULES:
        _MODULES[key] = MonoidModule(EXAMPLES[key])
    return _MODULES[key]


@pytest.fixture
def ex():
    return module


def random_matrix(rng: random.Random, dmax: int = 4, nmax: int = 8, entry: int = 3):
    """A random pointed matrix whose columns span Z^d, or None on rejection."""
    d = rng.randint(2, dmax)
    n = rng.randint(d + 1, max(d + 1, nmax))
    cols = [[rng.randint(1, entry)] + [rng.randint(0, entry) for _ in range(d - 1)] for _ in range(n)]
    a = [[c[i] for c in cols] for i in range(d)]
    try:
        return MonoidModule(a)
    except (NotPointed, NotFullLattice):
        return None


def random_modules(seed: int, count: int, **kw) -> list[MonoidModule]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = random_matrix(rng, **kw)
        if m is not None:
            out.append(m)
    return out
