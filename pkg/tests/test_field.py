from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgquadric.field import (
    FieldError, FieldSpec, field_make, field_of_order, is_irreducible, kernel_basis, matmul,
    prime_power, rank, rref, solve,
)

SMALL = [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (5, 1), (2, 4), (7, 1), (2, 5), (2, 6)]


def naive_mul(F: FieldSpec, a: int, b: int) -> int:
    """Schoolbook polynomial product reduced by the modulus; shares no tables."""
    p, h = F.p, F.h
    da, db = F.digits(a), F.digits(b)
    prod = [0] * (2 * h - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    m = F.modulus
    for deg in range(len(prod) - 1, h - 1, -1):
        c = prod[deg]
        if c:
            for k in range(h + 1):
                prod[deg - h + k] = (prod[deg - h + k] - c * m[k]) % p
    return sum(prod[k] * p**k for k in range(h))


def naive_add(F: FieldSpec, a: int, b: int) -> int:
    return F.from_digits([(x + y) % F.p for x, y in zip(F.digits(a), F.digits(b))])


def test_prime_fields():
    assert field_make(2, 1).q == 2
    assert field_make(3, 1).q == 3
    assert field_make(2, 1).modulus == (0, 1)


def test_gf4_modulus_is_the_only_irreducible_quadratic():
    F = field_make(2, 2)
    assert F.modulus == (1, 1, 1)
    quadratics = [(c0, c1, 1) for c0, c1 in product(range(2), repeat=2)]
    assert [m for m in quadratics if is_irreducible(m, 2)] == [(1, 1, 1)]


def test_modulus_is_lexicographically_smallest():
    for p, h in [(2, 3), (3, 2), (2, 4), (5, 2)]:
        F = field_make(p, h)
        code = sum(c * p**k for k, c in enumerate(F.modulus[:-1]))
        for smaller in range(code):
            low = [(smaller // p**k) % p for k in range(h)]
            assert not is_irreducible(low + [1], p)


def test_construction_errors():
    with pytest.raises(FieldError):
        field_make(4, 1)
    with pytest.raises(FieldError):
        field_make(2, 21)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(FieldError):
        prime_power(12)
    assert prime_power(9) == (3, 2)


def test_small_examples():
    assert field_make(2, 1).add(1, 1) == 0
    F4 = field_make(2, 2)
    g = 2  # class of x
    assert F4.mul(g, g) == F4.add(g, 1)
    assert field_make(3, 1).inv(2) == 2
    with pytest.raises(ZeroDivisionError):
        F4.inv(0)


def test_trace_examples():
    assert field_make(2, 1).trace(1) == 1
    F4 = field_make(2, 2)
    assert F4.trace(2) == 1
    assert F4.trace(1) == 0


@pytest.mark.parametrize("p,h", SMALL)
def test_tables_match_naive_polynomial_arithmetic(p, h):
    F = field_make(p, h)
    a, b = np.meshgrid(np.arange(F.q), np.arange(F.q), indexing="ij")
    prod = np.asarray(F.mul(a, b))
    total = np.asarray(F.add(a, b))
    for x in range(F.q):
        for y in range(F.q):
            assert prod[x, y] == naive_mul(F, x, y)
            assert total[x, y] == naive_add(F, x, y)


@pytest.mark.parametrize("p,h", SMALL)
def test_field_axioms_exhaustive(p, h):
    F = field_make(p, h)
    e = np.arange(F.q)
    a, b, c = np.meshgrid(e, e, e, indexing="ij") if F.q <= 16 else np.meshgrid(e, e, e[:5], indexing="ij")
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    nz = e[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(e, F.neg(e)) == 0)


@pytest.mark.parametrize("p,h", SMALL)
def test_frobenius_fixes_field_and_trace_in_prime_field(p, h):
    F = field_make(p, h)
    e = np.arange(F.q)
    assert np.array_equal(F.pow(e, F.q), e)
    tr = np.asarray(F.trace(e))
    assert tr.max() < p
    # trace is the naive sum of conjugates
    for a in range(F.q):
        acc, cur = 0, a
        for _ in range(h):
            acc = naive_add(F, acc, cur)
            nxt = 1
            for _ in range(p):
                nxt = naive_mul(F, nxt, cur)
            cur = nxt
        assert tr[a] == acc


def test_large_field_without_tables():
    F = field_make(2, 17)
    assert F._mul_table is None and F._inv_table is None
    rng = np.random.default_rng(1)
    xs = rng.integers(1, F.q, size=200)
    ys = rng.integers(1, F.q, size=200)
    assert np.all(F.mul(xs, F.inv(xs)) == 1)
    for x, y in zip(xs[:40], ys[:40]):
        assert F.mul(int(x), int(y)) == naive_mul(F, int(x), int(y))
    assert F.pow(int(xs[0]), F.q) == int(xs[0])


def test_odd_extension_without_tables():
    F = field_make(3, 7)  # q = 2187
    rng = np.random.default_rng(2)
    xs = rng.integers(1, F.q, size=50)
    for x in xs:
        assert F.mul(int(x), F.inv(int(x))) == 1
        assert F.add(int(x), F.neg(int(x))) == 0


@given(st.sampled_from([4, 8, 9, 25, 27, 49, 64, 81, 121, 128, 243, 256, 343, 512]), st.data())
@settings(max_examples=60, deadline=None)
def test_axioms_sampled(q, data):
    F = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, b) == naive_mul(F, a, b)
    if a:
        assert F.mul(a, F.inv(a)) == 1


def test_squares_odd():
    F = field_of_order(9)
    assert int(F.square_mask.sum()) == 4
    F = field_of_order(5)
    assert [x for x in range(1, 5) if F.is_square(x)] == [1, 4]


# -- linear algebra ------------------------------------------------------------

def test_linear_algebra_examples():
    F2 = field_make(2, 1)
    assert rank(F2, np.eye(3, dtype=int)) == 3
    assert kernel_basis(F2, np.eye(3, dtype=int)).shape == (0, 3)
    assert rank(F2, np.zeros((2, 2), dtype=int)) == 0
    assert len(kernel_basis(F2, np.zeros((2, 2), dtype=int))) == 2
    assert kernel_basis(F2, [[1, 1], [0, 0]]).tolist() == [[1, 1]]


def test_solve_and_mismatch():
    F = field_of_order(5)
    M = np.array([[1, 2], [3, 4]])
    x = solve(F, M, [1, 0])
    assert np.array_equal(matmul(F, M, x[:, None])[:, 0], [1, 0])
    assert solve(F, [[1, 1], [1, 1]], [0, 1]) is None
    with pytest.raises(ValueError):
        solve(F, M, [1, 2, 3])
    with pytest.raises(ValueError):
        matmul(F, np.ones((2, 3), dtype=int), np.ones((2, 2), dtype=int))


@given(st.sampled_from([2, 3, 4, 5, 8, 9]), st.integers(1, 5), st.integers(1, 6), st.data())
@settings(max_examples=80, deadline=None)
def test_rank_nullity(q, rows, cols, data):
    F = field_of_order(q)
    M = np.array(data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=cols, max_size=cols),
                                    min_size=rows, max_size=rows)))
    K = kernel_basis(F, M)
    assert rank(F, M) + len(K) == cols
    if len(K):
        assert not np.asarray(matmul(F, M, K.T)).any()
        R, piv = rref(F, K)
        assert np.array_equal(R, K)  # canonical: already reduced echelon
