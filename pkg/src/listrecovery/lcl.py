"""Local coordinate-wise linear (LCL) profiles and their containment in codes.

A profile assigns to every coordinate i a subspace V_i of GF(q)^b.  A code
contains the profile when some n x b matrix with distinct codeword columns has
row i in V_i for every i.  Profiles generated by agreement sets s_0..s_{b-1}
and a label matrix M force ``r[j] == r[t]`` whenever i lies in s_j and s_t
and ``M[i, j] == M[i, t]``; such a profile is contained in a code exactly when
some ball of the matching radius holds b codewords, which
:func:`consistency_check` tests on tiny instances.

Coordinates and column indices are 0-based; labels in M run over 1..ell.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from fractions import Fraction

import numpy as np

from . import _kernels
from ._util import as_fraction, fraction_str
from .algebra import Field, all_vectors, field_of_order, kernel_basis, rank
from .bounds import LogQuantity, lcl_family_log_size
from .codes import CapacityError, LinearCode, all_codewords, rng_for, sample_rlc
from .listrec import (InputLists, RecoveryBall, agreement, count_in_ball, in_ball,
                      max_list_size_search, padded, recover_list)

CONTAINMENT_BUDGET = 10**7


@dataclasses.dataclass(frozen=True, eq=False)
class ProfileSpec:
    """Agreement sets ``s`` (b sorted index tuples) and an n x b label matrix ``M``."""

    rho: Fraction
    ell: int
    s: tuple[tuple[int, ...], ...]
    M: np.ndarray

    def __post_init__(self):
        rho = as_fraction(self.rho)
        M = np.array(self.M, dtype=np.int64)
        if M.ndim != 2 or M.shape[1] < 1:
            raise ValueError(f"label matrix must be n x b with b >= 1, got shape {M.shape}")
        n, b = M.shape
        if not 0 <= rho <= 1:
            raise ValueError(f"radius {rho} outside [0, 1]")
        if len(self.s) != b:
            raise ValueError(f"{len(self.s)} agreement sets for b = {b} columns")
        size = math.ceil((1 - rho) * n)
        s = tuple(tuple(sorted(int(i) for i in sj)) for sj in self.s)
        for j, sj in enumerate(s):
            if len(set(sj)) != size or (sj and not 0 <= sj[0] <= sj[-1] < n):
                raise ValueError(f"agreement set {j} must hold {size} distinct coordinates in [0, {n})")
        if M.size and (M.min() < 1 or M.max() > self.ell):
            raise ValueError(f"labels must lie in [1, {self.ell}]")
        M.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @property
    def b(self) -> int:
        return self.M.shape[1]

    def __eq__(self, other) -> bool:
        return (isinstance(other, ProfileSpec) and (self.rho, self.ell, self.s) == (other.rho, other.ell, other.s)
                and np.array_equal(self.M, other.M))

    def __hash__(self) -> int:
        return hash((self.rho, self.ell, self.s, self.M.tobytes()))


class LocalProfile:
    """Per-coordinate subspaces V_i of GF(q)^b.

    Built either from a coordinate-equality partition (``labels[i, j]`` is the
    class of column j at coordinate i) or from explicit basis matrices.
    Bases, and the constraint rows whose kernel is V_i, are materialized on
    first use.
    """

    def __init__(self, field: Field, n: int, b: int, labels: np.ndarray | None = None,
                 bases: list[np.ndarray] | None = None):
        if (labels is None) == (bases is None):
            raise ValueError("give exactly one of labels or bases")
        self.field, self.n, self.b = field, n, b
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)
        self._bases: dict[int, np.ndarray] = {}
        self._constraints: dict[int, np.ndarray] = {}
        if bases is not None:
            if len(bases) != n:
                raise ValueError(f"{len(bases)} bases for n = {n}")
            for i, B in enumerate(bases):
                B = field.check(B).reshape(-1, b)
                if len(B) and rank(field, B) != len(B):
                    raise ValueError(f"basis rows of V_{i} are dependent")
                self._bases[i] = B

    @classmethod
    def from_bases(cls, field: Field, bases) -> "LocalProfile":
        bases = [np.asarray(B, dtype=np.int64) for B in bases]
        b = bases[0].shape[-1]
        return cls(field, len(bases), b, bases=bases)

    def dim(self, i: int) -> int:
        """dim V_i; for partition profiles, the number of classes."""
        if self.labels is not None:
            return len(set(self.labels[i].tolist()))
        return len(self.basis(i))

    def dim_by_rank(self, i: int) -> int:
        """dim V_i as b minus the rank of its constraint rows."""
        C = self.constraints(i)
        return self.b - (rank(self.field, C) if len(C) else 0)

    def basis(self, i: int) -> np.ndarray:
        B = self._bases.get(i)
        if B is None:
            lab = self.labels[i]
            classes = sorted(set(lab.tolist()))
            B = np.array([(lab == c).astype(np.int64) for c in classes])
            self._bases[i] = B
        return B

    def constraints(self, i: int) -> np.ndarray:
        """Rows h with V_i = {r : h . r = 0 for every h}."""
        C = self._constraints.get(i)
        if C is None:
            F, b = self.field, self.b
            if self.labels is not None:
                lab = self.labels[i]
                rows = []
                for j in range(b):
                    first = int(np.argmax(lab == lab[j]))
                    if first != j:
                        h = np.zeros(b, dtype=np.int64)
                        h[first], h[j] = 1, F.neg(1)
                        rows.append(h)
            else:
                B = self.basis(i)
                rows = kernel_basis(F, B) if len(B) else [np.eye(b, dtype=np.int64)[t] for t in range(b)]
            C = np.array(rows, dtype=np.int64).reshape(-1, b)
            self._constraints[i] = C
        return C

    def flat_constraints(self) -> tuple[np.ndarray, np.ndarray]:
        """All constraint rows stacked, with the coordinate each one applies to."""
        coords, rows = [], []
        for i in range(self.n):
            C = self.constraints(i)
            coords += [i] * len(C)
            rows.append(C)
        H = np.concatenate(rows) if rows else np.zeros((0, self.b), np.int64)
        return np.array(coords, dtype=np.int64), H

    def contains_row(self, i: int, r) -> bool:
        C = self.constraints(i)
        if not len(C):
            return True
        return not self.field.matmul(C, self.field.check(r)).any()

    def contains_matrix(self, A) -> bool:
        A = np.asarray(A)
        return all(self.contains_row(i, A[i]) for i in range(self.n))


def _classes(spec: ProfileSpec) -> np.ndarray:
    # union-find over columns, one partition per coordinate
    n, b = spec.n, spec.b
    member = np.zeros((n, b), dtype=bool)
    for j, sj in enumerate(spec.s):
        member[list(sj), j] = True
    labels = np.empty((n, b), dtype=np.int64)
    for i in range(n):
        parent = list(range(b))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j, t in itertools.combinations(range(b), 2):
            if member[i, j] and member[i, t] and spec.M[i, j] == spec.M[i, t]:
                parent[find(t)] = find(j)
        labels[i] = [find(j) for j in range(b)]
    return labels


def profile_from_spec(spec: ProfileSpec, field: Field) -> LocalProfile:
    return LocalProfile(field, spec.n, spec.b, labels=_classes(spec))


@dataclasses.dataclass(frozen=True, eq=False)
class ContainmentWitness:
    """An n x b matrix with distinct codeword columns and rows in the profile."""

    A: np.ndarray
    column_messages: np.ndarray

    def validate(self, code: LinearCode, profile: LocalProfile) -> list[str]:
        """Reasons the witness fails; empty when it is valid."""
        A = np.asarray(self.A)
        problems = []
        if A.shape != (code.n, profile.b):
            return [f"witness shape {A.shape} != ({code.n}, {profile.b})"]
        if len({tuple(c) for c in A.T.tolist()}) != profile.b:
            problems.append("columns are not distinct")
        enc = code.field.matmul(code.G, np.asarray(self.column_messages).T)
        if not np.array_equal(enc, A):
            problems.append("a column is not the encoding of its message")
        bad = [i for i in range(code.n) if not profile.contains_row(i, A[i])]
        if bad:
            problems.append(f"rows {bad} fall outside their subspaces")
        return problems


@dataclasses.dataclass(frozen=True)
class ContainmentResult:
    """Search outcome.  ``conclusive`` is False when absence comes from sampling."""

    witness: ContainmentWitness | None
    conclusive: bool

    @property
    def found(self) -> bool:
        return self.witness is not None


def _first_fit(code: LinearCode, profile: LocalProfile, cws: np.ndarray, msgs: np.ndarray,
               first_range: tuple[int, int]):
    # Earliest b-tuple of distinct codeword indices (lexicographic) whose
    # matrix satisfies every constraint; column 0 ranges over first_range.
    F, b = code.field, profile.b
    N = len(cws)
    coords, H = profile.flat_constraints()
    last_terms = F.mul(H[None, :, b - 1], cws[:, coords]) if len(H) else None
    outer_ranges = [range(*first_range)] + [range(N)] * (b - 2)
    if b == 1:
        outer_iter = [()]
        idx_first = range(*first_range)
    else:
        outer_iter = itertools.product(*outer_ranges)
        idx_first = None
    for outer in outer_iter:
        if len(set(outer)) != len(outer):
            continue
        if len(H):
            partial = np.zeros(len(H), dtype=np.int64)
            for j, c in enumerate(outer):
                partial = F.add(partial, F.mul(H[:, j], cws[c, coords]))
            ok = ~F.add(partial[None, :], last_terms).any(axis=1)
        else:
            ok = np.ones(N, dtype=bool)
        ok[list(outer)] = False
        if idx_first is not None:
            keep = np.zeros(N, dtype=bool)
            keep[idx_first.start:idx_first.stop] = True
            ok &= keep
        hits = np.nonzero(ok)[0]
        if len(hits):
            cols = list(outer) + [int(hits[0])]
            return ContainmentWitness(cws[cols].T.copy(), msgs[cols].copy())
    return None


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    cuts = [total * t // parts for t in range(parts + 1)]
    return [(a, b) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]


def code_contains_profile(code: LinearCode, profile: LocalProfile,
                          budget: int = CONTAINMENT_BUDGET, mode: str = "exhaustive",
                          trials: int = 1000, seed: int = 0,
                          workers: int | None = 1) -> ContainmentResult:
    """Look for a witness matrix of distinct codeword columns.

    ``exhaustive`` scans all (q^k)^b column tuples (raises CapacityError above
    ``budget``) and returns the lexicographically first witness.  ``random``
    draws ``trials`` b-tuples of random codewords; a miss is inconclusive.
    """
    if profile.field != code.field or profile.n != code.n:
        raise ValueError("profile and code disagree on field or length")
    F, b = code.field, profile.b
    if mode == "random":
        for t in range(trials):
            rng = rng_for(seed, t)
            msgs = F.random(rng, (b, code.k))
            A = F.matmul(code.G, msgs.T)
            w = ContainmentWitness(A, msgs)
            if not w.validate(code, profile):
                return ContainmentResult(w, True)
        return ContainmentResult(None, False)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    N = code.q ** code.k
    if N**b > budget:
        raise CapacityError(f"containment search over q^(k b) = {N**b} tuples exceeds budget {budget}", N**b)
    cws = all_codewords(code)
    msgs = all_vectors(code.q, code.k)
    parts = _split(N, _kernels.default_workers() if workers is None else workers)
    found = _kernels.run_parallel(lambda a, c: _first_fit(code, profile, cws, msgs, (a, c)),
                                  parts, workers)
    for w in found:
        if w is not None:
            return ContainmentResult(w, True)
    return ContainmentResult(None, True)


def violation_to_profile(ball: RecoveryBall, witnesses) -> ProfileSpec:
    """The profile that b distinct codewords of one ball jointly satisfy.

    s_j keeps the lexicographically least ``threshold`` coordinates of the
    agreement set of witness j; M[i, j] is the 1-based position of witness j's
    symbol inside the sorted list at i (1 off s_j).
    """
    W = ball.field.check(witnesses)
    W = W.reshape(-1, ball.n)
    if len({tuple(w) for w in W.tolist()}) != len(W):
        raise ValueError("witnesses must be distinct")
    t = ball.threshold
    s, M = [], np.ones((ball.n, len(W)), dtype=np.int64)
    for j, w in enumerate(W):
        agree = sorted(agreement(w, ball.lists))
        if len(agree) < t:
            raise ValueError(f"witness {j} agrees on {len(agree)} < {t} coordinates; not in the ball")
        sj = agree[:t]
        s.append(tuple(sj))
        for i in sj:
            M[i, j] = ball.lists.lists[i].index(int(w[i])) + 1
    return ProfileSpec(ball.rho, ball.ell, tuple(s), M)


def ball_from_witness(spec: ProfileSpec, field: Field, A) -> RecoveryBall:
    """Lists read off the witness columns on their agreement sets, padded."""
    A = np.asarray(A)
    lists = []
    for i in range(spec.n):
        vals = {int(A[i, j]) for j in range(spec.b) if i in spec.s[j]}
        lists.append(padded(vals, spec.ell, field.q))
    return RecoveryBall(spec.rho, InputLists(field, tuple(lists)))


def family_log_size(n: int, rho, ell: int, L: int) -> LogQuantity:
    return lcl_family_log_size(n, rho, ell, L)


def random_spec(n: int, b: int, rho, ell: int, rng: np.random.Generator) -> ProfileSpec:
    rho = as_fraction(rho)
    size = math.ceil((1 - rho) * n)
    s = tuple(tuple(sorted(rng.choice(n, size=size, replace=False).tolist())) for _ in range(b))
    M = rng.integers(1, ell + 1, size=(n, b))
    return ProfileSpec(rho, ell, s, M)


# -- text form ----------------------------------------------------------------

def dumps_spec(spec: ProfileSpec) -> str:
    lines = [
        "profile 1",
        f"b {spec.b}",
        f"rho {fraction_str(spec.rho)}",
        f"ell {spec.ell}",
        f"n {spec.n}",
    ]
    lines += ["s " + " ".join(map(str, sj)) for sj in spec.s]
    lines += [" ".join(map(str, row)) for row in spec.M.tolist()]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def loads_spec(text: str) -> ProfileSpec:
    lines = text.strip("\n").split("\n")
    if lines[0].split() != ["profile", "1"]:
        raise ValueError("not a profile document (version 1)")
    b = int(lines[1].split()[1])
    rho = Fraction(lines[2].split()[1])
    ell = int(lines[3].split()[1])
    n = int(lines[4].split()[1])
    s = tuple(tuple(int(x) for x in lines[5 + j].split()[1:]) for j in range(b))
    M = np.array([[int(x) for x in line.split()] for line in lines[5 + b:5 + b + n]],
                 dtype=np.int64).reshape(n, b)
    return ProfileSpec(rho, ell, s, M)


# -- consistency between profiles and bad lists -------------------------------

RADII = (Fraction(0), Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))


def check_instance(code: LinearCode, rho, ell: int, b: int, rng: np.random.Generator,
                   profiles: int = 20) -> dict:
    """Test containment <=> bad list on one code, both directions.

    Forward: the largest ball (exhaustive over all list choices) decides
    whether b codewords share a ball; if so the profile derived from them
    must be contained.  Converse: every random profile that is contained
    must yield, via its witness, a ball holding >= b codewords, which is
    impossible when no bad ball exists.
    """
    rho = as_fraction(rho)
    F = code.field
    problems = []
    ball, best = max_list_size_search(code, ell, rho, strategy="exhaustive-tiny")
    bad = best >= b
    if bad:
        members = recover_list(code, ball).codewords[:b]
        spec = violation_to_profile(ball, members)
        prof = profile_from_spec(spec, F)
        if not prof.contains_matrix(members.T):
            problems.append("bad-list codewords violate their own profile")
        res = code_contains_profile(code, prof)
        if not res.found:
            problems.append("profile of a bad list not contained")
        elif res.witness.validate(code, prof):
            problems.append("containment witness failed re-validation")
    contained = 0
    for _ in range(profiles):
        spec = random_spec(code.n, b, rho, ell, rng)
        prof = profile_from_spec(spec, F)
        if any(prof.dim(i) != prof.dim_by_rank(i) for i in range(code.n)):
            problems.append("dimension by classes and by rank disagree")
        res = code_contains_profile(code, prof)
        if not res.found:
            continue
        contained += 1
        if res.witness.validate(code, prof):
            problems.append("containment witness failed re-validation")
        wb = ball_from_witness(spec, F, res.witness.A)
        if not all(in_ball(c, wb) for c in res.witness.A.T):
            problems.append("witness columns outside the ball read off them")
        if count_in_ball(code, wb) < b:
            problems.append("contained profile but its ball holds fewer than b codewords")
        if not bad:
            problems.append("contained profile but no ball holds b codewords")
    return {
        "rho": fraction_str(rho),
        "ell": ell,
        "max_list": int(best),
        "bad": bool(bad),
        "profiles_contained": contained,
        "violations": len(problems),
        "problems": problems,
    }


def consistency_check(q: int, n: int, k: int, b: int, instances: int, seed: int,
                      profiles: int = 20, rho=None, ell: int | None = None,
                      workers: int | None = 1) -> list[dict]:
    """Run :func:`check_instance` on seeded random linear codes.

    Instance t draws its code, radius, list size and profiles from
    ``rng_for(seed, t)``, so each record depends only on (seed, t).
    """
    F = field_of_order(q)

    def one(t: int) -> dict:
        code = sample_rlc(F, n, k, seed, t)
        rng = rng_for(seed, t, 1)
        r = RADII[int(rng.integers(len(RADII)))] if rho is None else as_fraction(rho)
        l = int(rng.integers(1, 3)) if ell is None else ell
        rec = check_instance(code, r, l, b, rng, profiles)
        return {"trial": t, **rec}

    ranges = [(t, t + 1) for t in range(instances)]
    return _kernels.run_parallel(lambda a, _b: one(a), ranges, workers)
