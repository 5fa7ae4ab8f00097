"""Exact arithmetic in GF(q), q = p^m, and dense linear algebra over it.

Elements are integer indices in ``[0, q)``.  The index of an element is the
base-p value of its polynomial coefficient vector: index ``sum(c_t * p**t)``
stands for ``sum(c_t * x**t)`` modulo the field's modulus.  Index 0 is the
additive identity and index 1 the multiplicative identity.

All field operations accept Python ints or integer numpy arrays and broadcast.
Matrices are 2-D ``int64`` numpy arrays of element indices.
"""

from __future__ import annotations

import functools
import itertools
from typing import Sequence

import numpy as np

MAX_ORDER = 2**20
FULL_TABLE_MAX_ORDER = 4096


class FieldError(ValueError):
    """Invalid field parameters or elements from the wrong field."""


class RankError(ValueError):
    """A matrix expected to have full column rank does not."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _prime_factors(x: int) -> list[int]:
    out, f = [], 2
    while f * f <= x:
        if x % f == 0:
            out.append(f)
            while x % f == 0:
                x //= f
        f += 1
    if x > 1:
        out.append(x)
    return out


# -- polynomials over GF(p), coefficient lists low -> high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for t, ft in enumerate(f):
            a[shift + t] = (a[shift + t] - c * ft) % p
        _trim(a)
    return a


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials ordered by the base-p value of their lower coefficients."""
    for low in range(p**d):
        coeffs = [(low // p**t) % p for t in range(d)]
        yield coeffs + [1]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f) // 2."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] % p == 0:
        return False
    for e in range(1, d // 2 + 1):
        for g in _monic_polys(p, e):
            if not _poly_mod(f, g, p):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible polynomial of degree m over GF(p).

    Candidates are ordered by the base-p value of the coefficients below the
    leading one, so for p = 2 this is the usual ``x^4 + x + 1`` style choice.
    """
    if m == 1:
        return ()
    for f in _monic_polys(p, m):
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


class Field:
    """The finite field GF(p^m).

    Use :func:`GF` rather than the constructor; it caches instances so tables
    are built once per (p, m, modulus).

    Parameters
    ----------
    p : int
        Prime characteristic.
    m : int
        Extension degree, ``m >= 1``.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree m over GF(p), coefficients
        from the constant term upward (length m + 1).  Empty for prime fields.
        Defaults to :func:`default_modulus`.
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_ORDER:
            raise FieldError(f"field order {q} exceeds the cap 2^20")
        if modulus is None or (m == 1 and len(modulus) == 0):
            modulus = default_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if m > 1:
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {m}: {modulus}")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        elif modulus:
            raise FieldError("prime fields take an empty modulus")
        self.p, self.m, self.q, self.modulus = p, m, q, modulus
        self._pows = np.array([p**t for t in range(m)], dtype=np.int64)
        self._build_log_tables()

    # -- construction helpers ------------------------------------------------

    def _digits(self, a: np.ndarray) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64)[..., None] // self._pows) % self.p

    def _undigits(self, d: np.ndarray) -> np.ndarray:
        return (d % self.p) @ self._pows

    def _slow_mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        da = [int(c) for c in self._digits(a)]
        db = [int(c) for c in self._digits(b)]
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        r = _poly_mod(prod, self.modulus, self.p)
        return sum(c * self.p**t for t, c in enumerate(r))

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _scalar_matrix(self, c: int) -> np.ndarray:
        """Matrix over GF(p) of multiplication by c on digit vectors (row convention)."""
        rows = [self._digits(self._slow_mul(c, self.p**t)) for t in range(self.m)]
        return np.array(rows, dtype=np.int64)

    def _build_log_tables(self) -> None:
        q = self.q
        if q == 2:
            g = 1
        else:
            factors = _prime_factors(q - 1)
            g = next(
                c for c in range(2, q)
                if all(self._slow_pow(c, (q - 1) // r) != 1 for r in factors)
            )
        self.generator = g
        exp = np.zeros(q - 1, dtype=np.int64)
        exp[0] = 1
        filled, power = 1, g
        # doubling: exp[filled:2*filled] = exp[:filled] * g^filled
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            if self.m == 1:
                exp[filled:filled + take] = exp[:take] * power % self.p
            else:
                mat = self._scalar_matrix(power)
                exp[filled:filled + take] = self._undigits(self._digits(exp[:take]) @ mat)
            filled += take
            power = self._slow_mul(power, power)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self._exp = np.concatenate([exp, exp])
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self._inv = inv
        self._exp.flags.writeable = False
        self._log.flags.writeable = False
        self._inv.flags.writeable = False

    @functools.cached_property
    def mul_table(self) -> np.ndarray | None:
        """Full q x q product table, or None above the table-size cap."""
        if self.q > FULL_TABLE_MAX_ORDER:
            return None
        a = np.arange(self.q)
        dtype = np.uint8 if self.q <= 256 else np.uint16
        t = self._mul_logs(a[:, None], a[None, :]).astype(dtype)
        t.flags.writeable = False
        return t

    # -- identity / comparison ----------------------------------------------

    def spec(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.p, self.m, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self) -> int:
        return hash(self.spec())

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={self.modulus})"

    # -- element operations --------------------------------------------------

    def check(self, a) -> np.ndarray:
        """Validate element indices; returns them as an int64 array."""
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError(f"element index out of range for {self!r}")
        return arr

    @staticmethod
    def _out(x, like_scalar: bool):
        return int(x) if like_scalar else x

    def add(self, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            r = (a + b) % self.p
        elif self.p == 2:
            r = a ^ b
        else:
            r = self._undigits(self._digits(a) + self._digits(b))
        return self._out(r, scalar)

    def neg(self, a):
        scalar = np.isscalar(a)
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            r = (-a) % self.p
        elif self.p == 2:
            r = a
        else:
            r = self._undigits(-self._digits(a))
        return self._out(r, scalar)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mul_logs(self, a, b):
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def mul(self, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        t = self.mul_table
        r = t[a, b].astype(np.int64) if t is not None else self._mul_logs(a, b)
        return self._out(r, scalar)

    def inv(self, a):
        scalar = np.isscalar(a)
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._out(self._inv[a], scalar)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        scalar = np.isscalar(a)
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.inv(a), -e
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            r = np.ones_like(a)
        else:
            r = np.where(a == 0, 0, self._exp[(self._log[a] * e) % (self.q - 1)])
        return self._out(r, scalar)

    # -- vectors and matrices ------------------------------------------------

    def dot(self, a, b):
        """Inner product along the last axis."""
        return self.sum(self.mul(a, b), axis=-1)

    def sum(self, a, axis=-1):
        a = np.moveaxis(np.asarray(a, dtype=np.int64), axis, 0)
        if self.m == 1:
            return a.sum(axis=0) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=0) if len(a) else np.zeros(a.shape[1:], np.int64)
        return self._undigits(self._digits(a).sum(axis=0))

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(A.shape[1]):
            out = self.add(out, self.mul(A[:, t, None], B[None, t, :]))
        return out[:, 0] if vec else out

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, m: int, modulus: tuple[int, ...] | None) -> Field:
    return Field(p, m, modulus)


def GF(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Return the (cached) field GF(p^m)."""
    return _cached_field(p, m, None if modulus is None else tuple(modulus))


def field_of_order(q: int) -> Field:
    """GF(q) with the default modulus, for q a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1:
                break
            return GF(p, m)
    raise FieldError(f"{q} is not a prime power")


# -- Gaussian elimination ---------------------------------------------------

def rref(F: Field, M) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form of M over F.

    Returns ``(R, pivots, rank)`` where ``pivots`` lists the pivot column of
    each nonzero row of R.  Pivot rows are chosen as the first row (lowest
    index) with a nonzero entry in the current column.
    """
    R = F.check(M).copy()
    if R.ndim != 2 or R.size == 0:
        raise ValueError("rref needs a nonempty 2-D matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = F.mul(R[r], F.inv(int(R[r, c])))
        factors = R[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if len(hit):
            R[hit] = F.sub(R[hit], F.mul(factors[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots, r


def rank(F: Field, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return rref(F, M)[2]


def kernel_basis(F: Field, M) -> list[np.ndarray]:
    """Canonical basis of the right kernel {v : M v = 0}.

    One vector per free column, in ascending order; the free coordinate is set
    to 1, the other free coordinates to 0, and pivot coordinates are solved.
    """
    R, pivots, r = rref(F, M)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(int(R[i, f]))
        basis.append(v)
    return basis


def systematic_form(F: Field, G) -> tuple[np.ndarray, np.ndarray]:
    """Bring an n x k full-column-rank generator matrix to systematic form.

    Returns ``(Gs, perm)`` with ``Gs = P @ G @ T`` where T is invertible and
    the top k x k block of ``Gs`` is the identity.  Row i of ``Gs`` comes from
    row ``perm[i]`` of ``G @ T``: the information rows are the pivot rows
    chosen greedily by smallest index, followed by the remaining rows in
    their original order.
    """
    G = F.check(G)
    n, k = G.shape
    R, pivots, r = rref(F, G.T)
    if r < k:
        raise RankError(f"generator has column rank {r} < k = {k}")
    rest = [i for i in range(n) if i not in set(pivots)]
    perm = np.array(pivots + rest, dtype=np.int64)
    return R.T[perm].copy(), perm


def in_column_span(F: Field, G, v) -> bool:
    G = np.asarray(G, dtype=np.int64)
    return rank(F, np.column_stack([G, np.asarray(v, dtype=np.int64)])) == rank(F, G)


def index_to_vector(q: int, k: int, idx: int) -> np.ndarray:
    """Message with lexicographic index idx; coordinate 0 is most significant."""
    out = np.zeros(k, dtype=np.int64)
    for j in range(k - 1, -1, -1):
        idx, out[j] = divmod(idx, q)
    return out


def vector_to_index(q: int, v) -> int:
    idx = 0
    for x in v:
        idx = idx * q + int(x)
    return idx


def all_vectors(q: int, k: int) -> np.ndarray:
    """All q^k vectors in lexicographic order (small k only)."""
    return np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)
