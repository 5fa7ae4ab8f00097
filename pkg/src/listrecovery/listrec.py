"""Agreement sets, list-recovery balls and exhaustive list recovery.

Coordinates are 0-based throughout.  A ball of radius rho around input lists
S_0..S_{n-1} holds the vectors agreeing with the lists on at least
``ceil((1 - rho) * n)`` coordinates; rho is an exact Fraction.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from ._util import as_fraction
from .algebra import GF, Field, all_vectors, index_to_vector, rank
from .codes import ENUMERATION_BUDGET, LinearCode, check_budget, encode, rng_for

EXHAUSTIVE_BALL_LIMIT = 10**7


@dataclasses.dataclass(frozen=True, eq=False)
class InputLists:
    """n subsets of GF(q), each of size exactly ell, stored sorted."""

    field: Field
    lists: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lists = tuple(tuple(sorted(int(x) for x in s)) for s in self.lists)
        if not lists:
            raise ValueError("need at least one list")
        ell = len(lists[0])
        for i, s in enumerate(lists):
            if len(s) != ell or len(set(s)) != ell:
                raise ValueError(f"list {i} must have exactly {ell} distinct elements: {s}")
            if s[0] < 0 or s[-1] >= self.field.q:
                raise ValueError(f"list {i} has elements outside {self.field!r}")
        if ell < 1 or ell > self.field.q:
            raise ValueError(f"list size {ell} outside [1, q]")
        object.__setattr__(self, "lists", lists)

    @property
    def n(self) -> int:
        return len(self.lists)

    @property
    def ell(self) -> int:
        return len(self.lists[0])

    def mask(self) -> np.ndarray:
        """Boolean n x q membership table."""
        m = self.__dict__.get("_mask")
        if m is None:
            m = np.zeros((self.n, self.field.q), dtype=np.uint8)
            for i, s in enumerate(self.lists):
                m[i, list(s)] = 1
            m.flags.writeable = False
            object.__setattr__(self, "_mask", m)
        return m

    def __eq__(self, other) -> bool:
        return isinstance(other, InputLists) and (self.field, self.lists) == (other.field, other.lists)

    def __hash__(self) -> int:
        return hash((self.field, self.lists))

    def permuted(self, perm) -> "InputLists":
        """Lists for coordinates ``perm``: entry i is the list at coordinate perm[i]."""
        return InputLists(self.field, tuple(self.lists[int(j)] for j in perm))


def padded(values, ell: int, q: int) -> tuple[int, ...]:
    """Distinct values topped up to size ell with the smallest unused indices."""
    out = sorted(set(int(v) for v in values))
    if len(out) > ell:
        raise ValueError(f"{len(out)} values do not fit in a list of size {ell}")
    x = 0
    have = set(out)
    while len(out) < ell:
        if x not in have:
            out.append(x)
            have.add(x)
        x += 1
    if x > q:
        raise ValueError(f"cannot pad to size {ell} over q = {q}")
    return tuple(sorted(out))


@dataclasses.dataclass(frozen=True)
class RecoveryBall:
    rho: Fraction
    lists: InputLists

    def __post_init__(self):
        rho = as_fraction(self.rho)
        if not 0 <= rho <= 1:
            raise ValueError(f"radius {rho} outside [0, 1]")
        object.__setattr__(self, "rho", rho)

    @property
    def field(self) -> Field:
        return self.lists.field

    @property
    def n(self) -> int:
        return self.lists.n

    @property
    def ell(self) -> int:
        return self.lists.ell

    @property
    def threshold(self) -> int:
        return math.ceil((1 - self.rho) * self.n)


@dataclasses.dataclass(frozen=True, eq=False)
class RecoveredList:
    codewords: np.ndarray
    messages: np.ndarray
    span_dim: int

    def __len__(self) -> int:
        return len(self.codewords)


def _check_vector(x, lists: InputLists) -> np.ndarray:
    x = lists.field.check(x)
    if x.shape != (lists.n,):
        raise ValueError(f"vector of shape {x.shape} does not match n = {lists.n}")
    return x


def agreement(x, lists: InputLists) -> frozenset[int]:
    x = _check_vector(x, lists)
    return frozenset(i for i, (xi, s) in enumerate(zip(x.tolist(), lists.lists)) if xi in s)


def in_ball(x, ball: RecoveryBall) -> bool:
    return len(agreement(x, ball.lists)) >= ball.threshold


def _check_pair(code: LinearCode, ball: RecoveryBall):
    if code.field != ball.field:
        raise ValueError(f"code over {code.field!r} but ball over {ball.field!r}")
    if code.n != ball.n:
        raise ValueError(f"code length {code.n} != ball length {ball.n}")


def _flat_mask(ball: RecoveryBall) -> np.ndarray:
    return np.ascontiguousarray(ball.lists.mask().ravel())


def recover_list(code: LinearCode, ball: RecoveryBall, workers: int | None = 1,
                 budget: int = ENUMERATION_BUDGET) -> RecoveredList:
    """All codewords in the ball, by scanning every message."""
    _check_pair(code, ball)
    check_budget(code, budget)
    sc = code.scanner()
    parts = sc.ranges(_kernels.default_workers() if workers is None else workers)
    mask = _flat_mask(ball)
    res = _kernels.run_parallel(
        lambda a, b: sc.ball_range(a, b, mask, ball.threshold, collect=True), parts, workers)
    idx = np.concatenate([r[0] for r in res]) if res else np.zeros(0, np.int64)
    pows = code.q ** np.arange(code.k - 1, -1, -1, dtype=np.int64)
    msgs = (idx[:, None] // pows) % code.q
    cws = encode(code, msgs) if len(idx) else np.zeros((0, code.n), np.int64)
    return RecoveredList(cws, msgs, rank(code.field, msgs) if len(idx) else 0)


def count_in_ball(code: LinearCode, ball: RecoveryBall, workers: int | None = 1,
                  budget: int = ENUMERATION_BUDGET) -> int:
    _check_pair(code, ball)
    check_budget(code, budget)
    sc = code.scanner()
    parts = sc.ranges(_kernels.default_workers() if workers is None else workers)
    mask = _flat_mask(ball)
    res = _kernels.run_parallel(
        lambda a, b: sc.ball_range(a, b, mask, ball.threshold, collect=False), parts, workers)
    return int(sum(r[1] for r in res))


def independent_in_ball(code: LinearCode, ball: RecoveryBall, workers: int | None = 1,
                        budget: int = ENUMERATION_BUDGET) -> tuple[int, np.ndarray]:
    """Dimension of span(code ∩ ball) and a basis made of ball members.

    The basis is the greedy one over message-lexicographic order; splitting
    the scan into ranges and re-running the greedy pass over the per-range
    picks gives the same basis.
    """
    _check_pair(code, ball)
    check_budget(code, budget)
    sc = code.scanner()
    parts = sc.ranges(_kernels.default_workers() if workers is None else workers)
    mask = _flat_mask(ball)
    res = _kernels.run_parallel(
        lambda a, b: sc.ball_range(a, b, mask, ball.threshold, collect=False,
                                   track_rank=True, stop_at_full_rank=True), parts, workers)
    cand = [int(i) for r in res for i in r[2]]
    F = code.field
    chosen: list[np.ndarray] = []
    for idx in cand:
        v = index_to_vector(code.q, code.k, idx)
        if rank(F, np.array(chosen + [v])) > len(chosen):
            chosen.append(v)
        if len(chosen) == code.k:
            break
    if not chosen:
        return 0, np.zeros((0, code.n), dtype=np.int64)
    return len(chosen), encode(code, np.array(chosen))


# -- adversarial search -----------------------------------------------------

def random_lists(field: Field, n: int, ell: int, rng: np.random.Generator) -> InputLists:
    return InputLists(field, tuple(
        tuple(rng.choice(field.q, size=ell, replace=False).tolist()) for _ in range(n)))


def seeded_lists(code: LinearCode, ell: int, rng: np.random.Generator) -> InputLists:
    """Lists holding the symbols of ell random codewords, topped up with random symbols."""
    F = code.field
    msgs = F.random(rng, (ell, code.k))
    cws = encode(code, msgs)
    lists = []
    for i in range(code.n):
        vals = set(cws[:, i].tolist())
        while len(vals) < ell:
            vals.add(int(rng.integers(0, F.q)))
        lists.append(tuple(vals))
    return InputLists(F, tuple(lists))


def _all_subsets(q: int, ell: int):
    return list(itertools.combinations(range(q), ell))


def max_list_size_search(code: LinearCode, ell: int, rho, strategy: str = "codeword-seeded",
                         budget: int = 100, seed: int = 0, workers: int | None = 1,
                         enum_budget: int = ENUMERATION_BUDGET,
                         trial: int = 0) -> tuple[RecoveryBall, int]:
    """Largest list found over candidate balls of the given radius.

    ``random`` tries ``budget`` balls with uniformly random lists.
    ``codeword-seeded`` tries the same random balls plus ``budget`` balls
    seeded from random codewords.  ``exhaustive-tiny`` tries every ball
    (needs ``C(q, ell)^n <= 10^7``) and returns the true maximum.  Ties keep
    the earliest ball.  Proposals come from ``rng_for(seed, trial, 0)`` and
    ``rng_for(seed, trial, 1)``.
    """
    rho = as_fraction(rho)
    F, n = code.field, code.n
    if strategy == "exhaustive-tiny":
        return _exhaustive_max(code, ell, rho)
    if strategy not in ("random", "codeword-seeded"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if budget < 1:
        raise ValueError("search budget must be >= 1")
    proposals = []
    rng = rng_for(seed, trial, 0)
    proposals += [random_lists(F, n, ell, rng) for _ in range(budget)]
    if strategy == "codeword-seeded":
        rng = rng_for(seed, trial, 1)
        proposals += [seeded_lists(code, ell, rng) for _ in range(budget)]
    best, best_size = None, -1
    for lists in proposals:
        ball = RecoveryBall(rho, lists)
        size = count_in_ball(code, ball, workers, enum_budget)
        if size > best_size:
            best, best_size = ball, size
    return best, best_size


def _exhaustive_max(code: LinearCode, ell: int, rho: Fraction) -> tuple[RecoveryBall, int]:
    F, n = code.field, code.n
    subsets = _all_subsets(F.q, ell)
    if len(subsets) ** n > EXHAUSTIVE_BALL_LIMIT:
        raise ValueError(f"C(q, ell)^n = {len(subsets) ** n} balls exceeds 10^7")
    check_budget(code, 1 << 16)
    cws = encode(code, all_vectors(F.q, code.k))
    # member[s, c, i]: codeword c's symbol at i lies in subset s
    sub_mask = np.zeros((len(subsets), F.q), dtype=bool)
    for s, sub in enumerate(subsets):
        sub_mask[s, list(sub)] = True
    member = sub_mask[:, cws]  # (S, C, n)
    threshold = math.ceil((1 - rho) * n)
    best, best_size = None, -1
    # enumerate list tuples in lexicographic order, coordinate 0 slowest
    for choice in itertools.product(range(len(subsets)), repeat=n):
        agree = member[list(choice), :, range(n)].sum(axis=0)
        size = int((agree >= threshold).sum())
        if size > best_size:
            best, best_size = choice, size
    lists = InputLists(F, tuple(subsets[s] for s in best))
    return RecoveryBall(rho, lists), best_size


# -- canonical text form ----------------------------------------------------

def dumps_ball(ball: RecoveryBall) -> str:
    F = ball.field
    lines = [
        "ball 1",
        f"field {F.p} {F.m} " + " ".join(map(str, F.modulus)),
        f"rho {ball.rho.numerator}/{ball.rho.denominator}",
        f"n {ball.n}",
        f"ell {ball.ell}",
    ]
    lines += [" ".join(map(str, s)) for s in ball.lists.lists]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def loads_ball(text: str) -> RecoveryBall:
    lines = text.strip("\n").split("\n")
    if lines[0].split() != ["ball", "1"]:
        raise ValueError("not a ball document (version 1)")
    fv = [int(v) for v in lines[1].split()[1:]]
    p, m, modulus = fv[0], fv[1], fv[2:]
    F = GF(p, m, modulus if m > 1 else None)
    rho = Fraction(lines[2].split()[1])
    n = int(lines[3].split()[1])
    lists = tuple(tuple(int(x) for x in line.split()) for line in lines[5:5 + n])
    return RecoveryBall(rho, InputLists(F, lists))


def make_ball(field: Field, rho, lists: Sequence[Sequence[int]]) -> RecoveryBall:
    return RecoveryBall(as_fraction(rho), InputLists(field, tuple(tuple(s) for s in lists)))
