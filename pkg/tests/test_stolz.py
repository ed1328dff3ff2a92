"""Finite-difference machinery and the bounded-variation diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacspec.stolz import (
    class_diagnostic,
    diff,
    seq_norms,
    strided,
    strided_diagnostic,
    weighted_diagnostic,
)

int_floats = st.lists(st.integers(-100, 100).map(float), min_size=8,
                      max_size=32)


# ---------------------------------------------------------------------------
# the difference operator
# ---------------------------------------------------------------------------

@given(int_floats, int_floats, st.integers(0, 4))
def test_diff_is_linear_exactly(xs, ys, order):
    # integer-valued floats make the identity exact, no tolerance needed
    n = min(len(xs), len(ys))
    x = np.asarray(xs[:n])
    y = np.asarray(ys[:n])
    if order >= n:
        return
    assert np.array_equal(diff(x + y, order), diff(x, order) + diff(y, order))


@given(int_floats)
def test_diff_second_order_composes(xs):
    x = np.asarray(xs)
    assert np.array_equal(diff(x, 2), diff(diff(x, 1), 1))


def test_diff_product_rule_exact_on_integers():
    # Delta(xy)_n = x_{n+1} Delta y_n + (Delta x_n) y_n
    rng = np.random.default_rng(5)
    x = rng.integers(-50, 50, 32).astype(float)
    y = rng.integers(-50, 50, 32).astype(float)
    lhs = diff(x * y)
    rhs = x[1:] * diff(y) + diff(x) * y[:-1]
    assert np.array_equal(lhs, rhs)


def test_diff_shapes_and_matrix_input():
    stack = np.zeros((10, 2, 2))
    assert diff(stack, 3).shape == (7, 2, 2)
    with pytest.raises(ValueError):
        diff(np.arange(4.0), -1)


def test_seq_norms_variants():
    assert np.array_equal(seq_norms(np.array([-3.0, 4.0])), [3.0, 4.0])
    v = seq_norms(np.array([[3.0, 4.0], [0.0, 1.0]]))
    assert np.allclose(v, [5.0, 1.0])
    m = np.broadcast_to(np.eye(2), (4, 2, 2))
    assert np.allclose(seq_norms(m), 1.0)
    with pytest.raises(ValueError):
        seq_norms(np.zeros((2, 3, 3)))


def test_strided_partitions_the_sequence():
    x = np.arange(11)
    subs = strided(x, 3)
    assert [s.tolist() for s in subs] == [[0, 3, 6, 9], [1, 4, 7, 10],
                                          [2, 5, 8]]
    with pytest.raises(ValueError):
        strided(x, 0)


# ---------------------------------------------------------------------------
# class diagnostics
# ---------------------------------------------------------------------------

def test_diagnostic_summable_differences_consistent():
    # x_n = 1/(n+1): |Delta x| ~ n^-2, dyadic block sums halve
    n = np.arange(1 << 14)
    d = class_diagnostic(1.0 / (n + 1.0), r=1, s=0)
    assert d.verdict == "consistent"
    assert d.fitted_ratio[1] < 0.9
    assert d.exponents == {1: 1.0}


def test_diagnostic_log_drift_inconclusive():
    # x_n = log(n+2): |Delta x| ~ 1/n, block sums are near-constant
    n = np.arange(1 << 14)
    d = class_diagnostic(np.log(n + 2.0), r=1, s=0)
    assert d.verdict == "inconclusive"
    assert 0.9 < d.fitted_ratio[1] < 1.1


def test_diagnostic_unbounded_is_violated():
    n = np.arange(1 << 12)
    x = np.sqrt(n + 1.0)
    x[-1] = np.inf
    assert class_diagnostic(x, r=1, s=0).verdict == "violated"


def test_diagnostic_budget_is_enforced():
    n = np.arange(1 << 12)
    d = class_diagnostic(np.log(n + 2.0), r=1, s=0, budget=1e-3)
    assert d.verdict == "violated"


def test_diagnostic_orders_and_exponents():
    n = np.arange(1 << 12)
    x = 1.0 / (n + 1.0)
    d = class_diagnostic(x, r=3, s=1)
    # orders 1..r-s with exponent r/(j+s)
    assert sorted(d.partial_sums) == [1, 2]
    assert d.exponents == {1: 1.5, 2: 1.0}
    small = class_diagnostic(x, r=3, s=1, small_ball=True)
    assert sorted(small.partial_sums) == [0, 1, 2]
    assert small.exponents[0] == 3.0


def test_diagnostic_index_contract():
    with pytest.raises(ValueError):
        class_diagnostic(np.ones(16), r=1, s=1)   # needs s <= r-1
    with pytest.raises(ValueError):
        class_diagnostic(np.ones(16), r=2, s=-1)
    with pytest.raises(ValueError):
        class_diagnostic(np.ones(16), r=2, s=0, small_ball=True)


def test_strided_diagnostic_separates_alternating_profile():
    # (-1)^n has order-1 differences of size 2 at every index, but each
    # stride-2 residue is constant
    n = np.arange(1 << 12)
    x = (-1.0) ** n
    whole = class_diagnostic(x, r=1, s=0)
    assert whole.verdict == "inconclusive"
    per_residue = strided_diagnostic(x, 2, r=1, s=0)
    assert all(d.verdict == "consistent" for d in per_residue)
    assert all(d.partial_sums[1] == 0.0 for d in per_residue)


def test_weighted_diagnostic():
    n = np.arange(1 << 13)
    x = 1.0 / (n + 1.0)
    # weights n: sum |Delta x| n ~ sum 1/n diverges -> not consistent
    heavy = weighted_diagnostic(x, n.astype(float))
    assert heavy.verdict == "inconclusive"
    # constant weights: summable
    flat = weighted_diagnostic(x, np.ones_like(x))
    assert flat.verdict == "consistent"
    with pytest.raises(ValueError):
        weighted_diagnostic(x, np.ones(4))


def test_diagnostic_str_mentions_verdict():
    d = class_diagnostic(np.ones(64), r=2, s=0)
    assert "verdict" in str(d)
