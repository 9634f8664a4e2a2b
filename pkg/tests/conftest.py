import numpy as np
import pytest

from singular_weyl import ParameterSet


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def schrodinger3():
    return ParameterSet(n=3, q=1, s=0.5j)


def brute_force_admissible(n: int, lam_max: int) -> set[int]:
    """Direct enumeration of {l(n+2j) : 1 <= l <= j+1} (triangular for n=1)."""
    out: set[int] = set()
    if n == 1:
        l = 0
        while l * (l - 1) // 2 <= lam_max:
            out.add(l * (l - 1) // 2)
            l += 1
        return out
    j = 0
    while n + 2 * j <= lam_max:
        base = n + 2 * j
        for l in range(1, j + 2):
            val = l * base
            if val > lam_max:
                break
            out.add(val)
        j += 1
    return out
