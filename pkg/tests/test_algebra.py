from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from listrecovery.algebra import (GF, FieldError, RankError, default_modulus, field_of_order,
                                  in_column_span, index_to_vector, is_irreducible, kernel_basis,
                                  rank, rref, systematic_form, vector_to_index, all_vectors)
from oracles import PolyField, is_irreducible_bruteforce, rank_by_span

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 6)]


def oracle_for(F):
    return PolyField(F.p, F.m, F.modulus)


# -- field arithmetic ---------------------------------------------------------

def test_prime_field_addition():
    assert GF(5).add(3, 4) == 2


def test_gf4_square_of_x_is_x_plus_one():
    F = GF(2, 2)
    assert F.modulus == (1, 1, 1)
    assert F.mul(2, 2) == 3


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_inverse_of_one(p, m):
    assert GF(p, m).inv(1) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF(7).inv(0)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_tables_match_polynomial_arithmetic(p, m):
    F = GF(p, m)
    O = oracle_for(F)
    a = np.arange(F.q)
    add, mul = O.tables()
    assert np.array_equal(F.add(a[:, None], a[None, :]), add)
    assert np.array_equal(F.mul(a[:, None], a[None, :]), mul)
    assert np.array_equal(F.mul_table, mul)
    for x in range(1, F.q):
        assert F.inv(x) == O.inv(x)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 1), (7, 1), (2, 5), (2, 6)])
def test_field_axioms_exhaustive(p, m):
    # every triple for q <= 64, vectorized
    F = GF(p, m)
    a = np.arange(F.q)
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    assert np.array_equal(F.add(F.add(A, B), C), F.add(A, F.add(B, C)))
    assert np.array_equal(F.mul(F.mul(A, B), C), F.mul(A, F.mul(B, C)))
    assert np.array_equal(F.mul(A, F.add(B, C)), F.add(F.mul(A, B), F.mul(A, C)))
    assert np.array_equal(F.add(A, B), F.add(B, A))
    assert np.array_equal(F.mul(A, B), F.mul(B, A))
    assert np.array_equal(F.add(a, F.neg(a)), np.zeros_like(a))
    nz = a[1:]
    assert np.array_equal(F.mul(nz, F.inv(nz)), np.ones_like(nz))
    assert np.array_equal(F.sub(F.add(A, B), B), A)


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_field_axioms_large_field(a, b, c):
    F = GF(2, 16)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@given(st.integers(0, 3**9 - 1), st.integers(0, 3**9 - 1), st.integers(0, 3**9 - 1))
def test_field_axioms_odd_extension(a, b, c):
    F = GF(3, 9)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a


@given(st.integers(1, 2**8 - 1), st.integers(0, 600))
def test_pow_matches_repeated_multiplication(a, e):
    F = GF(2, 8)
    r = 1
    for _ in range(e % 300):
        r = F.mul(r, a)
    assert F.pow(a, e % 300) == r


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 5), (7, 2)])
def test_default_modulus_is_least_irreducible(p, m):
    f = default_modulus(p, m)
    assert f[-1] == 1 and len(f) == m + 1
    assert is_irreducible_bruteforce(f, p)
    # every monic polynomial with smaller lower-coefficient index is reducible
    for idx in range(sum(c * p**t for t, c in enumerate(f[:-1]))):
        g = [(idx // p**t) % p for t in range(m)] + [1]
        assert not is_irreducible_bruteforce(g, p)


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3)])
def test_irreducibility_test_agrees_with_bruteforce(p, m):
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        assert is_irreducible(f, p) == is_irreducible_bruteforce(f, p)


def test_field_construction_errors():
    with pytest.raises(FieldError):
        GF(4)
    with pytest.raises(FieldError):
        GF(2, 21)
    with pytest.raises(FieldError):
        GF(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)
    with pytest.raises(FieldError):
        GF(5).check([5])


def test_field_of_order():
    assert field_of_order(16) == GF(2, 4)
    assert field_of_order(13) == GF(13)
    with pytest.raises(FieldError):
        field_of_order(12)


# -- linear algebra -------------------------------------------------------------

def test_rref_identity_and_zero():
    F = GF(2)
    R, piv, r = rref(F, np.eye(3, dtype=int))
    assert np.array_equal(R, np.eye(3)) and piv == [0, 1, 2] and r == 3
    R, piv, r = rref(F, np.zeros((2, 2), dtype=int))
    assert not R.any() and r == 0


def test_rref_singular_gf3():
    R, piv, r = rref(GF(3), [[1, 2], [2, 1]])
    assert r == 1
    assert R.tolist() == [[1, 2], [0, 0]]


def test_rref_rejects_empty():
    with pytest.raises(ValueError):
        rref(GF(2), np.zeros((0, 3), dtype=int))


def test_kernel_examples():
    assert kernel_basis(GF(5), np.eye(2, dtype=int)) == []
    assert len(kernel_basis(GF(2), [[0, 0, 0]])) == 3
    (v,) = kernel_basis(GF(3), [[1, 1]])
    assert v.tolist() == [2, 1]


def matrices(max_rows=4, max_cols=4):
    return st.tuples(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (2, 3)]),
                     st.integers(1, max_rows), st.integers(1, max_cols), st.integers(0, 2**32 - 1))


def draw(spec):
    (p, m), r, c, seed = spec
    F = GF(p, m)
    return F, np.random.default_rng(seed).integers(0, F.q, size=(r, c))


@given(matrices())
def test_rank_matches_span_count(spec):
    F, M = draw(spec)
    assert rank(F, M) == rank_by_span(oracle_for(F), M)


@given(matrices())
def test_rank_of_transpose(spec):
    F, M = draw(spec)
    assert rank(F, M) == rank(F, M.T)


@given(matrices())
def test_rref_is_idempotent_and_reduced(spec):
    F, M = draw(spec)
    R, piv, r = rref(F, M)
    R2, piv2, r2 = rref(F, R)
    assert np.array_equal(R, R2) and piv == piv2 and r == r2
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert not R[r:].any()


@given(matrices(max_rows=4, max_cols=6))
def test_kernel_vectors_are_annihilated(spec):
    F, M = draw(spec)
    basis = kernel_basis(F, M)
    assert len(basis) == M.shape[1] - rank(F, M)
    for v in basis:
        assert not F.matmul(M, v).any()
    if basis:
        assert rank(F, np.array(basis)) == len(basis)


def test_systematic_form_fixed_point():
    F = GF(5)
    G = np.vstack([np.eye(3, dtype=int), [[1, 2, 3], [4, 0, 1]]])
    Gs, perm = systematic_form(F, G)
    assert np.array_equal(Gs, G) and perm.tolist() == [0, 1, 2, 3, 4]


def test_systematic_form_repetition_code():
    Gs, perm = systematic_form(GF(2), [[1], [1]])
    assert Gs.tolist() == [[1], [1]] and perm.tolist() == [0, 1]


def test_systematic_form_rank_error():
    with pytest.raises(RankError):
        systematic_form(GF(3), [[1, 2], [2, 1], [0, 0]])


@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1)]), st.integers(1, 3), st.integers(0, 3),
       st.integers(0, 2**32 - 1))
def test_systematic_form_preserves_code(pm, k, extra, seed):
    F = GF(*pm)
    rng = np.random.default_rng(seed)
    n = k + extra
    G = rng.integers(0, F.q, size=(n, k))
    if rank(F, G) < k:
        return
    Gs, perm = systematic_form(F, G)
    assert np.array_equal(Gs[:k], np.eye(k, dtype=int))
    X = all_vectors(F.q, k)
    orig = {tuple(r) for r in F.matmul(X, G.T).tolist()}
    back = np.empty_like(Gs)
    back[perm] = Gs
    mapped = {tuple(r) for r in F.matmul(X, back.T).tolist()}
    assert orig == mapped


def test_in_column_span():
    F = GF(3)
    G = np.array([[1, 0], [0, 1], [1, 1]])
    assert in_column_span(F, G, [2, 1, 0])
    assert not in_column_span(F, G, [1, 1, 1])


@given(st.integers(2, 9), st.integers(1, 5), st.data())
def test_index_vector_round_trip(q, k, data):
    idx = data.draw(st.integers(0, q**k - 1))
    v = index_to_vector(q, k, idx)
    assert vector_to_index(q, v) == idx
    assert v.tolist() == all_vectors(q, k)[idx].tolist()
