"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's arithmetic: fields are built from plain
polynomial multiplication, spans by closure, and list recovery by a direct
per-codeword scan.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


class PolyField:
    """GF(p^m) by schoolbook polynomial arithmetic on base-p digit vectors."""

    def __init__(self, p: int, m: int = 1, modulus=()):
        self.p, self.m, self.q = p, m, p**m
        self.modulus = tuple(modulus)

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**t) % self.p for t in range(self.m)]

    def undigits(self, d) -> int:
        return sum(int(c) * self.p**t for t, c in enumerate(d))

    def add(self, a: int, b: int) -> int:
        return self.undigits([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        return self.undigits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        f = self.modulus
        for top in range(len(prod) - 1, m - 1, -1):
            c = prod[top]
            if c:
                for t in range(m + 1):
                    prod[top - m + t] = (prod[top - m + t] - c * f[t]) % p
        return self.undigits(prod[:m])

    def inv(self, a: int) -> int:
        for b in range(1, self.q):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        add = np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        mul = np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        return add, mul


def poly_mul_mod_p(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible_bruteforce(f, p: int) -> bool:
    """No product of two monic polynomials of positive degree equals f."""
    m = len(f) - 1
    target = list(f)
    for d in range(1, m // 2 + 1):
        for a in itertools.product(range(p), repeat=d):
            for b in itertools.product(range(p), repeat=m - d):
                if poly_mul_mod_p(list(a) + [1], list(b) + [1], p) == target:
                    return False
    return True


def span_size(F: PolyField, rows) -> int:
    """Number of vectors in the row span, by closure."""
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        return 1
    width = len(rows[0])
    span = {tuple([0] * width)}
    for r in rows:
        new = set()
        for v in span:
            for c in range(F.q):
                new.add(tuple(F.add(x, F.mul(c, y)) for x, y in zip(v, r)))
        span = new
    return len(span)


def rank_by_span(F: PolyField, rows) -> int:
    return round(math.log(span_size(F, rows), F.q))


def all_messages(q: int, k: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)


def codewords(F: PolyField, G) -> tuple[np.ndarray, np.ndarray]:
    """All (messages, codewords) in message-lexicographic order, via the oracle tables."""
    add, mul = F.tables()
    G = np.asarray(G, dtype=np.int64)
    n, k = G.shape
    msgs = all_messages(F.q, k)
    cws = np.zeros((len(msgs), n), dtype=np.int64)
    for j in range(k):
        cws = add[cws, mul[G[:, j][None, :], msgs[:, j][:, None]]]
    return msgs, cws


def recover_scan(F: PolyField, G, lists, rho) -> np.ndarray:
    """Codewords agreeing with the lists on at least ceil((1 - rho) n) coordinates."""
    _, cws = codewords(F, G)
    n = cws.shape[1]
    need = math.ceil((1 - Fraction(rho)) * n)
    keep = []
    for c in cws:
        agree = sum(1 for i in range(n) if int(c[i]) in set(lists[i]))
        if agree >= need:
            keep.append(c)
    return np.array(keep, dtype=np.int64).reshape(-1, n)


def min_distance_pairwise(F: PolyField, G) -> int:
    """Smallest Hamming distance between two distinct codewords."""
    _, cws = codewords(F, G)
    D = (cws[:, None, :] != cws[None, :, :]).sum(axis=2)
    np.fill_diagonal(D, cws.shape[1] + 1)
    return int(D.min())
