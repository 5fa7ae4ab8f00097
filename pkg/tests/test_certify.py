from __future__ import annotations

import dataclasses
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrecovery.algebra import GF, field_of_order, in_column_span, rank
from listrecovery.bounds import lower_bound_list_size
from listrecovery.codes import sample_rlc
from listrecovery.certify import (CertificateCapacityError, ConstructionError,
                                  build_disjoint_supports, build_independent_subset_certificate,
                                  build_lower_bound_certificate, dumps_certificate,
                                  loads_certificate, verify_certificate,
                                  verify_independent_subset_certificate,
                                  verify_lower_bound_certificate)
from listrecovery.listrec import RecoveryBall, recover_list
from oracles import PolyField, recover_scan

EPS = Fraction(21, 100)


@pytest.mark.parametrize("seed", range(10))
def test_disjoint_support_invariants(seed):
    code = sample_rlc(GF(5), 20, 10, seed=seed)
    fam = build_disjoint_supports(code, EPS)
    assert fam.k_prime == 5 and fam.m == 1
    k, kp = code.k, fam.k_prime
    head = fam.w_vectors[:, :k + kp] != 0
    assert head.any(axis=1).all()
    assert (head.sum(axis=0) <= 1).all()
    assert not fam.w_vectors[:-1, k:k + kp].any()
    assert rank(code.field, fam.w_vectors) == fam.m + 1
    # original coordinates are codewords of the original code
    for w in fam.original():
        assert in_column_span(code.field, code.G, w)


def test_block_too_wide():
    code = sample_rlc(GF(5), 20, 10, seed=0)
    with pytest.raises(ConstructionError, match="k'"):
        build_disjoint_supports(code, Fraction(1, 2) - Fraction(1, 100))
    with pytest.raises(ConstructionError):
        build_disjoint_supports(code, Fraction(1, 2))


def test_lower_bound_certificate_small():
    code = sample_rlc(GF(5), 20, 10, seed=3)
    cert = build_lower_bound_certificate(code, 2, EPS)
    assert len(cert.trapped) == 4 and cert.rho == Fraction(1, 4)
    report = verify_lower_bound_certificate(code, cert)
    assert report.passed, report.lines()
    assert [c.name for c in report.checks] == ["codewords", "distinct", "in_ball", "count", "radius",
                                                "brute_force"]


def test_trapped_list_matches_oracle_scan():
    code = sample_rlc(GF(5), 12, 6, seed=3)
    cert = build_lower_bound_certificate(code, 2, Fraction(1, 6))
    want = recover_scan(PolyField(5), code.G, cert.ball.lists.lists, cert.rho)
    got = recover_list(code, cert.ball).codewords
    assert np.array_equal(got, want)
    assert {tuple(v) for v in cert.trapped.tolist()} <= {tuple(v) for v in want.tolist()}


def test_single_list_element_traps_one_codeword():
    code = sample_rlc(GF(5), 20, 10, seed=1)
    cert = build_lower_bound_certificate(code, 1, EPS)
    assert len(cert.trapped) == 1 and not cert.trapped.any()
    assert verify_lower_bound_certificate(code, cert).passed


def test_zero_codeword_is_trapped_once():
    code = sample_rlc(GF(7), 20, 10, seed=5)
    cert = build_lower_bound_certificate(code, 3, EPS)
    zero = [i for i, v in enumerate(cert.trapped) if not v.any()]
    assert zero == [0]
    # linearity: the sum of two trapped words with beta 1 parts is trapped when 2 is a beta
    T = {tuple(v) for v in cert.trapped.tolist()}
    F = code.field
    w = cert.family.original()
    assert tuple(F.add(w[0], w[1])) in T and tuple(F.mul(2, w[0])) in T


def _replace(cert, **kw):
    return dataclasses.replace(cert, **kw)


def test_mutations_are_detected():
    code = sample_rlc(GF(5), 20, 10, seed=2)
    cert = build_lower_bound_certificate(code, 2, EPS)
    T = cert.trapped.copy()
    T[1, 0] = (T[1, 0] + 1) % 5
    failed = verify_lower_bound_certificate(code, _replace(cert, trapped=T)).failed()
    assert "codewords" in failed or "in_ball" in failed

    T = cert.trapped.copy()
    T[2] = T[1]
    assert "distinct" in verify_lower_bound_certificate(code, _replace(cert, trapped=T)).failed()

    small = RecoveryBall(Fraction(0), cert.ball.lists)
    failed = verify_lower_bound_certificate(code, _replace(cert, ball=small)).failed()
    assert "in_ball" in failed and "brute_force" in failed

    wide = RecoveryBall(Fraction(9, 10), cert.ball.lists)
    assert verify_lower_bound_certificate(code, _replace(cert, ball=wide),
                                          brute_force=False).failed() == ["radius"]


def test_capacity_guard():
    code = sample_rlc(GF(2, 4), 64, 30, seed=0)
    with pytest.raises(CertificateCapacityError) as e:
        build_lower_bound_certificate(code, 16, Fraction(1, 60))
    assert e.value.size > 10**6


def test_argument_errors():
    code = sample_rlc(GF(3), 20, 10, seed=0)
    with pytest.raises(ConstructionError):
        build_lower_bound_certificate(code, 4, EPS)
    with pytest.raises(ConstructionError):
        build_lower_bound_certificate(code, 2, EPS, betas=(1, 1))
    with pytest.raises(ConstructionError):
        build_lower_bound_certificate(code, 2, Fraction(0))
    with pytest.raises(ConstructionError):
        build_lower_bound_certificate(code, 2, Fraction(1, 2))


def test_claimed_bound_is_met_when_exponent_is_large():
    code = sample_rlc(GF(5), 20, 10, seed=4)
    cert = build_lower_bound_certificate(code, 2, EPS)
    assert cert.claimed_bound == lower_bound_list_size(Fraction(1, 2), EPS, 2)
    if cert.floor_exponent_met:
        assert 2 ** (cert.m + 1) >= cert.claimed_bound


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 4, 5, 7, 8]), st.integers(8, 24), st.integers(0, 10**6), st.data())
def test_build_then_verify(q, n, seed, data):
    F = field_of_order(q)
    k = data.draw(st.integers(2, min(n - 2, 8)))
    code = sample_rlc(F, n, k, seed=seed)
    R = code.rate
    eps = data.draw(st.fractions(Fraction(1, 50), (1 - R) * Fraction(99, 100)))
    ell = data.draw(st.integers(1, min(q, 3)))
    try:
        cert = build_lower_bound_certificate(code, ell, eps)
    except (ConstructionError, CertificateCapacityError):
        return
    report = verify_lower_bound_certificate(code, cert)
    assert report.passed, report.lines()


def test_lower_bound_round_trip_is_bit_exact():
    code = sample_rlc(GF(5), 20, 10, seed=6)
    cert = build_lower_bound_certificate(code, 2, EPS)
    text = dumps_certificate(cert)
    back = loads_certificate(text)
    assert dumps_certificate(back) == text
    assert verify_certificate(back).passed


# -- independent subset -------------------------------------------------------

def test_independent_subset_gf8():
    code = sample_rlc(GF(2, 3), 16, 8, seed=0)
    cert = build_independent_subset_certificate(code, 2, Fraction(1, 4))
    assert cert.m == 3 and len(cert.vectors) == 3
    assert min(cert.agreement_counts) >= 12
    report = verify_independent_subset_certificate(code, cert)
    assert report.passed, report.lines()
    text = dumps_certificate(cert)
    assert dumps_certificate(loads_certificate(text)) == text


def test_fewest_vectors_case():
    # with ell = 2 the count is at least 2; eps close to 1 - R reaches it
    code = sample_rlc(GF(5), 12, 6, seed=1)
    cert = build_independent_subset_certificate(code, 2, Fraction(1, 2) - Fraction(1, 100))
    assert cert.m == 2
    assert verify_independent_subset_certificate(code, cert).passed


def test_dropping_a_vector_shows_rank_shortfall():
    code = sample_rlc(GF(2, 3), 16, 8, seed=2)
    cert = build_independent_subset_certificate(code, 2, Fraction(1, 4))
    short = _replace(cert, vectors=cert.vectors[:2])
    report = verify_independent_subset_certificate(code, short, brute_force=False)
    assert report.failed() == ["rank"]
    assert "shortfall 1" in report.lines()[0]


def test_shrunk_radius_fails_membership():
    code = sample_rlc(GF(2, 3), 16, 8, seed=3)
    cert = build_independent_subset_certificate(code, 2, Fraction(1, 4))
    tight = _replace(cert, ball=RecoveryBall(Fraction(0), cert.ball.lists))
    assert "in_ball" in verify_independent_subset_certificate(code, tight, brute_force=False).failed()


def test_independent_subset_too_short():
    code = sample_rlc(GF(2, 3), 4, 3, seed=0)
    with pytest.raises(ConstructionError, match=r"agrees on 3 < .* = 4"):
        build_independent_subset_certificate(code, 2, Fraction(1, 7))


def test_independent_subset_argument_errors():
    code = sample_rlc(GF(2, 3), 16, 8, seed=0)
    with pytest.raises(ConstructionError, match="ell >= 2"):
        build_independent_subset_certificate(code, 1, Fraction(1, 4))
    with pytest.raises(ConstructionError, match="m <= k"):
        build_independent_subset_certificate(code, 2, Fraction(1, 20))
    with pytest.raises(ConstructionError, match="q >= ell"):
        build_independent_subset_certificate(sample_rlc(GF(3), 12, 4, seed=0), 4, Fraction(1, 4))


def test_unknown_schema():
    with pytest.raises(ValueError):
        loads_certificate('{"schema": "x", "code": "", "params": {}}')
