"""Explicit witnesses against list recoverability, with independent verification.

Two constructions, both starting from a systematic generator matrix:

* :func:`build_lower_bound_certificate` splits the information columns into
  blocks of k'+1 columns, k' = ceil(eps k / R).  A kernel vector of each block
  restricted to parity rows k..k+k'-1 gives a codeword w_i vanishing there;
  with w_m the last information column, the w_i have disjoint supports on the
  first k+k' coordinates.  All ell^(m+1) combinations sum_i beta_{r_i} w_i then
  agree with size-ell lists on those k+k' coordinates, so they sit in one ball
  of radius (n-k-k')/n <= 1-R-eps.

* :func:`build_independent_subset_certificate` places the first
  m = ceil((1-R) ell / eps) - 1 information columns in one ball of radius
  1-R-eps: lists {0, 1, ...} on information coordinates and a round-robin
  share of the columns' symbols on every parity coordinate.

Certificates are stored in original coordinates and carry the row
permutation of the systematic form.  The verifiers re-derive every claim from
the code and the certificate data alone.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
from fractions import Fraction

import numpy as np

from . import __version__
from ._util import as_fraction, fraction_str
from .algebra import Field, in_column_span, kernel_basis, rank, systematic_form
from .bounds import lower_bound_list_size, prop_lb_count
from .codes import ENUMERATION_BUDGET, LinearCode, dumps_code, loads_code
from .listrec import (InputLists, RecoveryBall, agreement, in_ball, independent_in_ball,
                      padded, recover_list)

MAX_TRAPPED = 10**6
LOWER_BOUND_SCHEMA = "lower-bound-certificate/1"
INDEPENDENT_SCHEMA = "independent-subset-certificate/1"


class ConstructionError(ValueError):
    """The parameters defeat a construction; the message names the inequality."""


class CertificateCapacityError(RuntimeError):
    def __init__(self, message: str, size: int):
        super().__init__(message)
        self.size = size


def _unpermute(v: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Map a vector from systematic coordinates back: out[perm[j]] = v[..., j]."""
    out = np.empty_like(v)
    out[..., perm] = v
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class DisjointSupportFamily:
    """Codewords w_0..w_m with disjoint supports on the first k+k' systematic coordinates.

    ``w_vectors`` are in systematic (permuted) coordinates.
    """

    w_vectors: np.ndarray
    blocks: tuple[tuple[int, ...], ...]
    coefficients: tuple[tuple[int, ...], ...]
    k_prime: int
    m: int
    row_permutation: np.ndarray
    systematic_generator: np.ndarray

    def original(self) -> np.ndarray:
        return _unpermute(self.w_vectors, self.row_permutation)


def _ratios(code: LinearCode, eps) -> tuple[Fraction, Fraction]:
    eps = as_fraction(eps)
    R = code.rate
    if eps <= 0:
        raise ConstructionError(f"need eps > 0, got {eps}")
    if not 1 - R - eps > 0:
        raise ConstructionError(f"need 1 - R - eps > 0, got {1 - R - eps}")
    return R, eps


def build_disjoint_supports(code: LinearCode, eps) -> DisjointSupportFamily:
    R, eps = _ratios(code, eps)
    F, k = code.field, code.k
    k_prime = math.ceil(eps / R * k)
    if k_prime >= k:
        raise ConstructionError(f"need k' < k for a block to fit: k' = {k_prime} >= k = {k}")
    m = (k - 1) // (k_prime + 1)
    Gs, perm = systematic_form(F, code.G)
    parity = slice(k, k + k_prime)
    ws, blocks, coeffs = [], [], []
    for i in range(m):
        cols = tuple(range(i * (k_prime + 1), (i + 1) * (k_prime + 1)))
        c = kernel_basis(F, Gs[parity, list(cols)])[0]
        ws.append(F.matmul(Gs[:, list(cols)], c))
        blocks.append(cols)
        coeffs.append(tuple(int(x) for x in c))
    ws.append(Gs[:, k - 1].copy())
    blocks.append((k - 1,))
    coeffs.append((1,))
    fam = DisjointSupportFamily(np.array(ws), tuple(blocks), tuple(coeffs), k_prime, m,
                                perm, Gs)
    _check_family(F, fam, k)
    return fam


def _check_family(F: Field, fam: DisjointSupportFamily, k: int) -> None:
    W = fam.w_vectors
    head = W[:, :k + fam.k_prime] != 0
    if not head.any(axis=1).all():
        raise AssertionError("family contains a zero vector")
    if (head.sum(axis=0) > 1).any():
        raise AssertionError("family supports overlap on the first k + k' coordinates")
    if W[:-1, k:k + fam.k_prime].any():
        raise AssertionError("a block vector is supported on the cleared parity rows")
    if rank(F, W) != len(W):
        raise AssertionError("family is linearly dependent")


@dataclasses.dataclass(frozen=True, eq=False)
class LowerBoundCertificate:
    """ell^(m+1) codewords trapped in a ball of radius (n-k-k')/n.

    Vectors and lists are in original coordinates.
    """

    code: LinearCode
    ell: int
    eps: Fraction
    family: DisjointSupportFamily
    betas: tuple[int, ...]
    trapped: np.ndarray
    ball: RecoveryBall
    claimed_bound: int
    floor_exponent_met: bool

    @property
    def m(self) -> int:
        return self.family.m

    @property
    def rho(self) -> Fraction:
        return self.ball.rho

    def to_dict(self) -> dict:
        fam = self.family
        return {
            "schema": LOWER_BOUND_SCHEMA,
            "code": dumps_code(self.code),
            "params": {
                "ell": self.ell,
                "eps": fraction_str(self.eps),
                "k_prime": fam.k_prime,
                "m": fam.m,
                "rho": fraction_str(self.rho),
                "certified_list_size": int(len(self.trapped)),
                "claimed_bound": self.claimed_bound,
                "floor_exponent_met": self.floor_exponent_met,
            },
            "permutation": fam.row_permutation.tolist(),
            "blocks": [list(b) for b in fam.blocks],
            "coefficients": [list(c) for c in fam.coefficients],
            "w_vectors": fam.original().tolist(),
            "betas": list(self.betas),
            "lists": [list(s) for s in self.ball.lists.lists],
            "trapped": self.trapped.tolist(),
        }


def build_lower_bound_certificate(code: LinearCode, ell: int, eps,
                                  betas=None) -> LowerBoundCertificate:
    R, eps = _ratios(code, eps)
    F, n, k = code.field, code.n, code.k
    if ell < 1 or F.q < ell:
        raise ConstructionError(f"need 1 <= ell <= q, got ell = {ell}, q = {F.q}")
    betas = tuple(range(ell)) if betas is None else tuple(int(b) for b in betas)
    if len(betas) != ell or len(set(betas)) != ell:
        raise ConstructionError(f"need {ell} distinct beta values, got {betas}")
    F.check(betas)
    fam = build_disjoint_supports(code, eps)
    m, kp = fam.m, fam.k_prime
    size = ell ** (m + 1)
    if size > MAX_TRAPPED:
        raise CertificateCapacityError(f"ell^(m+1) = {size} trapped codewords exceeds 10^6", size)

    combos = np.array(list(itertools.product(range(ell), repeat=m + 1)), dtype=np.int64)
    B = np.array(betas, dtype=np.int64)[combos]
    trapped_sys = F.matmul(B, fam.w_vectors)

    lists = []
    for j in range(n):
        if j < k + kp:
            owners = np.nonzero(fam.w_vectors[:, j])[0]
            if len(owners):
                vals = F.mul(np.array(betas), int(fam.w_vectors[owners[0], j]))
            else:
                vals = [0]
            lists.append(padded(vals, ell, F.q))
        else:
            lists.append(tuple(range(ell)))
    perm = fam.row_permutation
    orig_lists = [None] * n
    for j, s in enumerate(lists):
        orig_lists[perm[j]] = s
    ball = RecoveryBall(Fraction(n - k - kp, n), InputLists(F, tuple(orig_lists)))
    return LowerBoundCertificate(
        code=code,
        ell=ell,
        eps=eps,
        family=fam,
        betas=betas,
        trapped=_unpermute(trapped_sys, perm),
        ball=ball,
        claimed_bound=lower_bound_list_size(R, eps, ell),
        floor_exponent_met=k > 2 * R**2 / eps**2,
    )


# -- verification -------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in self.checks]

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [dataclasses.asdict(c) for c in self.checks]}


def _codeword_check(code: LinearCode, vectors: np.ndarray) -> Check:
    bad = [i for i, v in enumerate(vectors) if not in_column_span(code.field, code.G, v)]
    return Check("codewords", not bad, f"{len(vectors) - len(bad)}/{len(vectors)} in the code"
                 + (f"; first offender {bad[0]}" if bad else ""))


def _membership_check(ball: RecoveryBall, vectors: np.ndarray) -> Check:
    bad = [i for i, v in enumerate(vectors) if not in_ball(v, ball)]
    return Check("in_ball", not bad, f"{len(vectors) - len(bad)}/{len(vectors)} agree on "
                 f">= {ball.threshold} coordinates" + (f"; first offender {bad[0]}" if bad else ""))


def verify_lower_bound_certificate(code: LinearCode, cert: LowerBoundCertificate,
                                   brute_force: bool = True,
                                   budget: int = ENUMERATION_BUDGET,
                                   workers: int | None = 1) -> VerificationReport:
    T = np.asarray(cert.trapped, dtype=np.int64)
    checks = [_codeword_check(code, T)]
    distinct = len({tuple(v) for v in T.tolist()})
    checks.append(Check("distinct", distinct == len(T), f"{distinct} distinct of {len(T)}"))
    checks.append(_membership_check(cert.ball, T))
    expected = cert.ell ** (cert.m + 1)
    checks.append(Check("count", len(T) == expected, f"{len(T)} trapped, ell^(m+1) = {expected}"))
    limit = 1 - code.rate - cert.eps
    checks.append(Check("radius", cert.ball.rho <= limit,
                        f"rho = {fraction_str(cert.ball.rho)} <= 1-R-eps = {fraction_str(limit)}"))
    if brute_force and code.q**code.k <= budget:
        found = recover_list(code, cert.ball, workers=workers, budget=budget)
        have = {tuple(v) for v in found.codewords.tolist()}
        missing = sum(tuple(v) not in have for v in T.tolist())
        checks.append(Check("brute_force", missing == 0,
                            f"exhaustive list has {len(found)} codewords; "
                            f"{missing} trapped vectors missing"))
    return VerificationReport(tuple(checks))


# -- independent subset -------------------------------------------------------

@dataclasses.dataclass(frozen=True, eq=False)
class IndependentSubsetCertificate:
    code: LinearCode
    ell: int
    eps: Fraction
    m: int
    vectors: np.ndarray
    ball: RecoveryBall
    agreement_counts: tuple[int, ...]
    row_permutation: np.ndarray

    def to_dict(self) -> dict:
        return {
            "schema": INDEPENDENT_SCHEMA,
            "code": dumps_code(self.code),
            "params": {
                "ell": self.ell,
                "eps": fraction_str(self.eps),
                "m": self.m,
                "rho": fraction_str(self.ball.rho),
                "threshold": self.ball.threshold,
            },
            "permutation": self.row_permutation.tolist(),
            "vectors": self.vectors.tolist(),
            "agreement_counts": list(self.agreement_counts),
            "lists": [list(s) for s in self.ball.lists.lists],
        }


def build_independent_subset_certificate(code: LinearCode, ell: int,
                                         eps) -> IndependentSubsetCertificate:
    R, eps = _ratios(code, eps)
    F, n, k = code.field, code.n, code.k
    if ell < 2:
        raise ConstructionError(f"need ell >= 2 so lists hold 0 and 1, got ell = {ell}")
    if F.q < ell:
        raise ConstructionError(f"need q >= ell, got q = {F.q}, ell = {ell}")
    m = prop_lb_count(R, eps, ell)
    if m > k:
        raise ConstructionError(f"need m <= k: m = ceil((1-R) ell/eps) - 1 = {m} > k = {k}")
    Gs, perm = systematic_form(F, code.G)
    V = Gs[:, :m].T.copy()
    lists = [padded([0, 1], ell, F.q) for _ in range(k)]
    for jj in range(n - k):
        window = {(jj * ell + t) % m for t in range(ell)} if m else set()
        lists.append(padded([V[i, k + jj] for i in sorted(window)], ell, F.q))
    rho = 1 - R - eps
    sys_lists = InputLists(F, tuple(lists))
    threshold = math.ceil((1 - rho) * n)
    counts = tuple(len(agreement(v, sys_lists)) for v in V)
    for i, c in enumerate(counts):
        if c < threshold:
            raise ConstructionError(
                f"vector {i} agrees on {c} < ceil((R+eps) n) = {threshold} coordinates; "
                f"n = {n} is too small for these parameters")
    orig_lists = [None] * n
    for j, s in enumerate(lists):
        orig_lists[perm[j]] = s
    ball = RecoveryBall(rho, InputLists(F, tuple(orig_lists)))
    return IndependentSubsetCertificate(code, ell, eps, m, _unpermute(V, perm), ball, counts, perm)


def verify_independent_subset_certificate(code: LinearCode, cert: IndependentSubsetCertificate,
                                          brute_force: bool = True,
                                          budget: int = ENUMERATION_BUDGET,
                                          workers: int | None = 1) -> VerificationReport:
    V = np.asarray(cert.vectors, dtype=np.int64).reshape(-1, code.n)
    m = prop_lb_count(code.rate, cert.eps, cert.ell)
    r = rank(code.field, V) if len(V) else 0
    checks = [Check("rank", r >= m, f"rank {r}, required {m}" + ("" if r >= m else f"; shortfall {m - r}"))]
    checks.append(_codeword_check(code, V))
    checks.append(_membership_check(cert.ball, V))
    limit = 1 - code.rate - cert.eps
    checks.append(Check("radius", cert.ball.rho <= limit,
                        f"rho = {fraction_str(cert.ball.rho)} <= 1-R-eps = {fraction_str(limit)}"))
    if brute_force and code.q**code.k <= budget:
        dim, _ = independent_in_ball(code, cert.ball, workers=workers, budget=budget)
        checks.append(Check("brute_force", dim >= m,
                            f"span of code ∩ ball has dimension {dim} >= {m}"))
    return VerificationReport(tuple(checks))


# -- documents ----------------------------------------------------------------

def dumps_certificate(cert, extra: dict | None = None) -> str:
    doc = cert.to_dict()
    doc["tool_version"] = __version__
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _ball_from(doc: dict, F: Field) -> RecoveryBall:
    return RecoveryBall(Fraction(doc["params"]["rho"]),
                        InputLists(F, tuple(tuple(s) for s in doc["lists"])))


def loads_certificate(text: str):
    """Rebuild a certificate from its document.  Nothing is re-derived."""
    doc = json.loads(text)
    code = loads_code(doc["code"])
    F = code.field
    P = doc["params"]
    perm = np.array(doc["permutation"], dtype=np.int64)
    ball = _ball_from(doc, F)
    eps = Fraction(P["eps"])
    if doc["schema"] == LOWER_BOUND_SCHEMA:
        W = np.array(doc["w_vectors"], dtype=np.int64)
        fam = DisjointSupportFamily(
            w_vectors=W[:, perm] if len(W) else W,
            blocks=tuple(tuple(b) for b in doc["blocks"]),
            coefficients=tuple(tuple(c) for c in doc["coefficients"]),
            k_prime=P["k_prime"], m=P["m"], row_permutation=perm,
            systematic_generator=np.zeros((0, 0), dtype=np.int64))
        return LowerBoundCertificate(
            code=code, ell=P["ell"], eps=eps, family=fam, betas=tuple(doc["betas"]),
            trapped=np.array(doc["trapped"], dtype=np.int64).reshape(-1, code.n),
            ball=ball, claimed_bound=P["claimed_bound"],
            floor_exponent_met=P["floor_exponent_met"])
    if doc["schema"] == INDEPENDENT_SCHEMA:
        return IndependentSubsetCertificate(
            code=code, ell=P["ell"], eps=eps, m=P["m"],
            vectors=np.array(doc["vectors"], dtype=np.int64).reshape(-1, code.n),
            ball=ball, agreement_counts=tuple(doc["agreement_counts"]),
            row_permutation=perm)
    raise ValueError(f"unknown certificate schema {doc['schema']!r}")


def verify_certificate(cert, **kw) -> VerificationReport:
    if isinstance(cert, LowerBoundCertificate):
        return verify_lower_bound_certificate(cert.code, cert, **kw)
    return verify_independent_subset_certificate(cert.code, cert, **kw)
