"""Linear codes over GF(q): random linear codes, Reed-Solomon codes, enumeration.

Randomness
----------
Every sampler takes an integer ``seed`` and an optional ``trial`` index.  The
stream for (seed, trial) is ``numpy.random.Generator(PCG64(SeedSequence(seed,
spawn_key=(trial,))))``; trial t of an experiment therefore owns an
independent substream regardless of how trials are scheduled.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _kernels
from .algebra import GF, Field, RankError, all_vectors, index_to_vector, rank

ENUMERATION_BUDGET = 2**30
MAX_REDRAWS = 100


class SamplingError(RuntimeError):
    """Too many consecutive rank-deficient random draws."""


class CapacityError(RuntimeError):
    """An exhaustive enumeration would exceed its budget."""

    def __init__(self, message: str, size: int):
        super().__init__(message)
        self.size = size


def rng_for(seed: int, trial: int = 0, *stream: int) -> np.random.Generator:
    """Generator for (seed, trial); extra ``stream`` keys give further independent substreams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial, *stream))))


@dataclasses.dataclass(frozen=True, eq=False)
class LinearCode:
    """Column span of an n x k generator matrix with independent columns."""

    field: Field
    G: np.ndarray
    resamples: int = dataclasses.field(default=0, compare=False)

    def __post_init__(self):
        G = self.field.check(self.G)
        if G.ndim != 2:
            raise ValueError("generator must be a 2-D matrix")
        n, k = G.shape
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        r = rank(self.field, G)
        if r < k:
            raise RankError(f"generator has column rank {r} < k = {k}")
        G = np.array(G, dtype=np.int64)
        G.flags.writeable = False
        object.__setattr__(self, "G", G)

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def k(self) -> int:
        return self.G.shape[1]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearCode) and self.field == other.field
                and np.array_equal(self.G, other.G))

    def __hash__(self) -> int:
        return hash((self.field, self.G.tobytes(), self.G.shape))

    def __repr__(self) -> str:
        return f"LinearCode({self.field!r}, n={self.n}, k={self.k})"

    def scanner(self) -> _kernels.Scanner:
        s = self.__dict__.get("_scanner")
        if s is None:
            s = _kernels.Scanner(self.field, self.G)
            object.__setattr__(self, "_scanner", s)
        return s


def sample_rlc(field: Field, n: int, k: int, seed: int, trial: int = 0) -> LinearCode:
    """Random linear code: i.i.d. uniform n x k generator, redrawn until rank k.

    The number of rejected draws is kept in ``code.resamples``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    rng = rng_for(seed, trial)
    for attempt in range(MAX_REDRAWS):
        G = field.random(rng, (n, k))
        if rank(field, G) == k:
            return LinearCode(field, G, resamples=attempt)
    raise SamplingError(f"{MAX_REDRAWS} consecutive rank-deficient draws for "
                        f"{field!r}, n={n}, k={k}")


def rs_code(field: Field, points, k: int) -> LinearCode:
    """Reed-Solomon code with generator ``G[i, j] = points[i] ** j``."""
    pts = field.check(points).ravel()
    n = len(pts)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    distinct = len(set(pts.tolist()))
    if distinct < k:
        raise RankError(f"only {distinct} distinct evaluation points, need >= k = {k}")
    G = np.column_stack([field.pow(pts, j) for j in range(k)])
    return LinearCode(field, G)


def sample_random_rs(field: Field, n: int, k: int, seed: int, trial: int = 0,
                     distinct: bool = False) -> tuple[LinearCode, np.ndarray]:
    """Reed-Solomon code on i.i.d. uniform evaluation points.

    With ``distinct=True`` points are drawn without replacement instead.
    Draws with fewer than k distinct points are redrawn (count in
    ``code.resamples``).
    """
    if distinct and n > field.q:
        raise ValueError(f"cannot draw {n} distinct points from {field!r}")
    rng = rng_for(seed, trial)
    for attempt in range(MAX_REDRAWS):
        if distinct:
            pts = rng.choice(field.q, size=n, replace=False).astype(np.int64)
        else:
            pts = field.random(rng, n)
        if len(set(pts.tolist())) >= k:
            code = rs_code(field, pts, k)
            return dataclasses.replace(code, resamples=attempt), pts
    raise SamplingError(f"{MAX_REDRAWS} consecutive draws with < {k} distinct points")


def encode(code: LinearCode, message) -> np.ndarray:
    """G @ message; also accepts a batch of messages as rows of a 2-D array."""
    msg = code.field.check(message)
    if msg.shape[-1] != code.k:
        raise ValueError(f"message length {msg.shape[-1]} != k = {code.k}")
    if msg.ndim == 1:
        return code.field.matmul(code.G, msg)
    return code.field.matmul(msg, code.G.T)


def check_budget(code: LinearCode, budget: int = ENUMERATION_BUDGET) -> int:
    size = code.q**code.k
    if size > budget:
        raise CapacityError(f"enumerating q^k = {size} codewords exceeds budget {budget}", size)
    return size


def enumerate_codewords(code: LinearCode, start: int = 0, stop: int | None = None,
                        chunk: int = 1 << 14,
                        budget: int = ENUMERATION_BUDGET) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(messages, codewords)`` blocks over message indices [start, stop).

    Messages are in lexicographic index order, so disjoint ranges partition
    the stream.
    """
    total = check_budget(code, budget)
    stop = total if stop is None else min(stop, total)
    q, k = code.q, code.k
    pows = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for a in range(start, stop, chunk):
        idx = np.arange(a, min(a + chunk, stop), dtype=np.int64)
        msgs = (idx[:, None] // pows) % q
        yield msgs, encode(code, msgs)


def min_distance(code: LinearCode, workers: int | None = 1,
                 budget: int = ENUMERATION_BUDGET) -> tuple[int, np.ndarray]:
    """Minimum weight of a nonzero codeword and the first codeword attaining it."""
    total = check_budget(code, budget)
    sc = code.scanner()
    parts = sc.ranges(_kernels.default_workers() if workers is None else workers, 1, total)
    results = _kernels.run_parallel(sc.weight_range, parts, workers)
    best, arg = min(results, key=lambda t: (t[0], t[1]))
    return int(best), encode(code, index_to_vector(code.q, code.k, int(arg)))


def relative_distance(code: LinearCode, workers: int | None = 1) -> Fraction:
    return Fraction(min_distance(code, workers)[0], code.n)


# -- canonical text form ----------------------------------------------------

def dumps_code(code: LinearCode) -> str:
    F = code.field
    lines = [
        "linear-code 1",
        f"p {F.p}",
        f"m {F.m}",
        "modulus " + " ".join(map(str, F.modulus)),
        f"n {code.n}",
        f"k {code.k}",
    ]
    lines += [" ".join(map(str, row)) for row in code.G.tolist()]
    return "\n".join(lines) + "\n"


def loads_code(text: str) -> LinearCode:
    lines = text.strip("\n").split("\n")
    if lines[0].split() != ["linear-code", "1"]:
        raise ValueError("not a linear-code document (version 1)")
    head = {}
    for line in lines[1:6]:
        key, *vals = line.split()
        head[key] = [int(v) for v in vals]
    p, m = head["p"][0], head["m"][0]
    n, k = head["n"][0], head["k"][0]
    F = GF(p, m, head["modulus"] if m > 1 else None)
    G = np.array([[int(x) for x in line.split()] for line in lines[6:6 + n]], dtype=np.int64)
    if G.shape != (n, k):
        raise ValueError(f"generator shape {G.shape} does not match header ({n}, {k})")
    return LinearCode(F, G)


def all_codewords(code: LinearCode) -> np.ndarray:
    """Every codeword, message-lexicographic (small codes only)."""
    check_budget(code, 1 << 22)
    return encode(code, all_vectors(code.q, code.k))
