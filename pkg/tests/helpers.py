"""Random exact objects shared by the property tests."""

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from phiplanes.exterior import AlternatingForm, basis_masks

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def forms(n, k, max_terms=5):
    return st.dictionaries(st.sampled_from(basis_masks(n, k)), rationals,
                           max_size=max_terms).map(lambda d: AlternatingForm(n, k, d))


def any_form(n, max_terms=5):
    return st.integers(0, n).flatmap(lambda k: forms(n, k, max_terms))


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n)


def matrices(rows, cols):
    return st.lists(st.lists(rationals, min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows).map(lambda m: np.array(m, dtype=object))


def rand_fraction(rng, lo=-4, hi=4, den=4):
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))


def rand_form(rng, n, k, terms=5):
    masks = basis_masks(n, k)
    pick = rng.choice(len(masks), size=min(terms, len(masks)), replace=False)
    return AlternatingForm(n, k, {masks[i]: rand_fraction(rng) for i in pick})


def rand_matrix(rng, rows, cols):
    return np.array([[rand_fraction(rng) for _ in range(cols)] for _ in range(rows)], dtype=object)


def rand_vector(rng, n):
    return [rand_fraction(rng) for _ in range(n)]


def givens(n, i, j, c, s):
    """Rotation by (c, s) in the (i, j) plane; exact for Pythagorean pairs."""
    G = np.empty((n, n), dtype=object)
    G[...] = Fraction(0)
    for a in range(n):
        G[a, a] = Fraction(1)
    G[i, i] = G[j, j] = Fraction(c)
    G[i, j], G[j, i] = -Fraction(s), Fraction(s)
    return G


PYTHAGOREAN = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
               (Fraction(8, 17), Fraction(15, 17)), (Fraction(7, 25), Fraction(24, 25))]


def rand_rotation(rng, n, steps=4):
    R = givens(n, 0, 1, 1, 0)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c, s = PYTHAGOREAN[int(rng.integers(len(PYTHAGOREAN)))]
        if rng.integers(2):
            s = -s
        R = R @ givens(n, int(i), int(j), c, s)
    return R
