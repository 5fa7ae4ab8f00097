"""Closed-form bound calculators for list recovery of linear and RS codes.

Every quantity is reported as a base-2 logarithm, with an exact big-rational
companion when the formula has rational value at the given parameters and
the instance is small.  Inputs R, eps, rho accept Fractions, ints, 'a/b'
strings, or floats (read through their decimal repr, so ``0.21`` means 21/100).

Where a formula needs ``rho * n`` to be an integer, ``floor(rho * n)`` is used:
it is the number of coordinates a vector in the ball may disagree on.
"""

from __future__ import annotations

import dataclasses
import decimal
import math
from fractions import Fraction

from ._util import as_fraction

EXACT_MAX_N = 24
DESK_LOG2_LIMIT = 20
EXACT_MAX_BITS = 1 << 20


@dataclasses.dataclass(frozen=True)
class LogQuantity:
    """A positive quantity stored as log2, optionally with its exact value."""

    log2_value: float
    exact: Fraction | None = None

    @classmethod
    def from_exact(cls, x) -> "LogQuantity":
        x = Fraction(x)
        return cls(exact_log2(x), x)

    @property
    def desk_feasible(self) -> bool:
        """True when the quantity is at most 2^20."""
        return self.log2_value <= DESK_LOG2_LIMIT

    @property
    def value(self) -> float:
        return 2.0**self.log2_value


def exact_log2(x: Fraction) -> float:
    x = Fraction(x)
    if x < 0:
        raise ValueError("log of a negative number")
    if x == 0:
        return -math.inf
    return math.log2(x.numerator) - math.log2(x.denominator)


def _log2_comb(n: int, r: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)) / math.log(2)


def _int_if_integral(x: Fraction) -> int | None:
    return x.numerator if x.denominator == 1 else None


def _check_capacity(R: Fraction, eps: Fraction) -> None:
    if not 0 < R < 1:
        raise ValueError(f"rate R = {R} must lie in (0, 1)")
    if eps <= 0:
        raise ValueError(f"gap eps = {eps} must be positive")
    if 1 - R - eps <= 0:
        raise ValueError(f"need 1 - R - eps > 0, got {1 - R - eps}")


def q_ary_entropy(x: float, base: float) -> float:
    """H_base(x) = x log(base-1) - x log x - (1-x) log(1-x), logs to the given base."""
    x = float(x)
    base = float(base)
    if not 0 <= x <= 1:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if base <= 1:
        raise ValueError(f"entropy base {base} must exceed 1")

    def xlogx(t):
        return 0.0 if t == 0 else t * math.log(t)

    h = x * math.log(base - 1) - xlogx(x) - xlogx(1 - x)
    return h / math.log(base)


@dataclasses.dataclass(frozen=True)
class BadConfigBound:
    """Union bound on a random linear code containing a bad configuration.

    ``chain`` holds log2 of every step of the inequality chain, from the raw
    union bound down to ``q^(-eps n L / 8)``; under the alphabet preconditions
    it is non-increasing.
    """

    rho: Fraction
    L: Fraction
    first_line: LogQuantity
    endpoint: LogQuantity
    chain: tuple[float, ...]
    preconditions_met: bool


def capacity_alphabet_log2(R, eps, ell: int) -> tuple[float, float]:
    """log2 of the two alphabet requirements ell^(8R/eps + 6) and ell * 2^(4/eps)."""
    R, eps = as_fraction(R), as_fraction(eps)
    return (float(8 * R / eps + 6) * math.log2(ell), math.log2(ell) + float(4 / eps))


def zp_bad_config_log_prob(n: int, q: int, ell: int, R, eps) -> BadConfigBound:
    """Union bound over input lists and independent message L-sets, L = 2 ell / eps.

    first line: (C(n, d) ell^(n-d) (q - ell)^d / q^n)^L * q^(n ell) * q^(R n L)
    with d = floor(rho n), rho = 1 - R - eps.
    """
    R, eps = as_fraction(R), as_fraction(eps)
    _check_capacity(R, eps)
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    if q <= ell:
        raise ValueError(f"need q > ell, got q = {q}, ell = {ell}")
    rho = 1 - R - eps
    L = 2 * ell / eps
    d = math.floor(rho * n)
    lq, ll = math.log2(q), math.log2(ell)
    per_word = _log2_comb(n, d) + (n - d) * ll + d * math.log2(q - ell) - n * lq
    first = float(L) * per_word + n * ell * lq + float(R * n * L) * lq

    exact = None
    Li, RnL = _int_if_integral(L), _int_if_integral(R * n * L)
    if n <= EXACT_MAX_N and Li is not None and RnL is not None:
        word = Fraction(math.comb(n, d) * ell ** (n - d) * (q - ell) ** d, q**n)
        exact = word**Li * Fraction(q) ** (n * ell) * Fraction(q) ** RnL

    end = -float(eps * n * L / 8) * lq
    end_exact = None
    e8 = _int_if_integral(eps * n * L / 8)
    if n <= EXACT_MAX_N and e8 is not None:
        end_exact = Fraction(1, q**e8)

    Q = q / ell
    H = q_ary_entropy(float(rho), Q)
    log_Q = math.log2(Q)
    tail = n * ell * lq + float(R * n * L) * lq
    entropy_step = float(L) * (n * (ll - lq) + H * n * log_Q) + tail
    rate_step = -float((R + 3 * eps / 4) * n * L) * log_Q + tail
    collapsed = float((R + 3 * eps / 4) * n * L) * ll - float(eps * n * L / 4) * lq
    a1, a2 = capacity_alphabet_log2(R, eps, ell)
    return BadConfigBound(
        rho=rho,
        L=L,
        first_line=LogQuantity(first, exact),
        endpoint=LogQuantity(end, end_exact),
        chain=(first, entropy_step, rate_step, collapsed, end),
        preconditions_met=lq >= max(a1, a2),
    )


def tamo_list_bound(ell: int, eps, r: int) -> LogQuantity:
    """(2 ell / eps)^r: list size bound for a span of dimension r."""
    eps = as_fraction(eps)
    if eps <= 0 or r < 0:
        raise ValueError("need eps > 0 and r >= 0")
    base = 2 * ell / eps
    b = _int_if_integral(base)
    if b is not None:
        return LogQuantity.from_exact(b**r)
    return LogQuantity(r * math.log2(base))


@dataclasses.dataclass(frozen=True)
class RlcCapacity:
    q_min: LogQuantity
    L_max: LogQuantity
    eps: Fraction

    def failure_log2(self, n: int, q: float | None = None) -> LogQuantity:
        """log2 of the failure probability 2 q^(-eps n / 8); q defaults to q_min."""
        lq = self.q_min.log2_value if q is None else math.log2(q)
        return LogQuantity(1 - float(self.eps * n / 8) * lq)


def rlc_capacity_params(R, eps, ell: int) -> RlcCapacity:
    """Alphabet threshold, list-size bound and failure rate for random linear codes."""
    R, eps = as_fraction(R), as_fraction(eps)
    _check_capacity(R, eps)
    e1, e2 = 8 * R / eps + 6, 4 / eps
    a1, a2 = capacity_alphabet_log2(R, eps, ell)
    i1, i2 = _int_if_integral(e1), _int_if_integral(e2)
    if i1 is not None and i2 is not None:
        q_min = LogQuantity.from_exact(max(ell**i1, ell * 2**i2))
    else:
        q_min = LogQuantity(max(a1, a2))
    t = 2 * ell / eps
    ti = _int_if_integral(t)
    if ti is not None:
        L_max = LogQuantity.from_exact(ti**ti)
    else:
        L_max = LogQuantity(float(t) * math.log2(t))
    return RlcCapacity(q_min, L_max, eps)


def lcl_family_log_size(n: int, rho, ell: int, L: int) -> LogQuantity:
    """C(n, floor(rho n))^(L+1) * ell^((L+1) n): size bound of the profile family."""
    rho = as_fraction(rho)
    if not 0 <= rho <= 1 or ell < 1 or L < 0 or n < 1:
        raise ValueError("need 0 <= rho <= 1, ell >= 1, L >= 0, n >= 1")
    d = math.floor(rho * n)
    b = L + 1
    log2_value = b * _log2_comb(n, d) + b * n * math.log2(ell)
    exact = None
    if n <= EXACT_MAX_N and log2_value <= EXACT_MAX_BITS:
        exact = Fraction(math.comb(n, d) ** b * ell ** (b * n))
    return LogQuantity(log2_value, exact)


def rs_transfer_rhs_log(b: int, R_prime, n: int, eps_prime, q: int, logF) -> LogQuantity:
    """log2 of (2^b - 1) ((4b)^(4b) R' n / (eps' q))^(eps' n / 2b) |F|.

    ``logF`` is log2 |F| (a float or a LogQuantity).
    """
    R_prime, eps_prime = as_fraction(R_prime), as_fraction(eps_prime)
    if isinstance(logF, LogQuantity):
        logF = logF.log2_value
    if not q > R_prime * n * b:
        raise ValueError(f"need q > R' n b: {q} <= {float(R_prime * n * b)}")
    if not eps_prime * n >= 2 * b * (b + 1):
        raise ValueError(f"need eps' n >= 2 b (b + 1): {float(eps_prime * n)} < {2 * b * (b + 1)}")
    if logF == -math.inf:
        return LogQuantity(-math.inf, Fraction(0))
    inner = 4 * b * math.log2(4 * b) + math.log2(R_prime * n) - math.log2(eps_prime * q)
    return LogQuantity(math.log2(2**b - 1) + float(eps_prime * n / (2 * b)) * inner + logF)


def _floor_power(base: Fraction, expo: Fraction) -> int:
    """floor(base ** expo) for rational base > 0 and expo >= 0."""
    ei = _int_if_integral(expo)
    if ei is not None:
        return math.floor(base**ei)
    approx = float(expo) * math.log10(base)
    with decimal.localcontext() as ctx:
        ctx.prec = int(approx) + 40
        v = (decimal.Decimal(base.numerator) / decimal.Decimal(base.denominator)).ln()
        v = (v * decimal.Decimal(expo.numerator) / decimal.Decimal(expo.denominator)).exp()
        return int(v.to_integral_value(rounding=decimal.ROUND_FLOOR))


def rs_corollary_alphabet_log(R, eps, ell: int, eps_prime, eta, n: int) -> tuple[LogQuantity, int]:
    """Alphabet size needed for random RS codes of rate R - eps'.

    q > ((4b)^(4b) R n / eps') * 2^(((log2 ell + 2) b + eta) * 2b / eps'),
    b = L + 1, L = floor((2 ell / eps)^(2 ell / eps)).  Returns (log2 q, L).
    """
    R, eps, eps_prime, eta = (as_fraction(x) for x in (R, eps, eps_prime, eta))
    _check_capacity(R, eps)
    if not 0 < eps_prime < R:
        raise ValueError(f"need 0 < eps' < R, got eps' = {eps_prime}")
    if eta <= 0:
        raise ValueError("eta must be positive")
    t = 2 * ell / eps
    L = _floor_power(t, t)
    b = L + 1
    log_q = (4 * b * math.log2(4 * b) + math.log2(R * n / eps_prime)
             + ((math.log2(ell) + 2) * b + float(eta)) * 2 * b / float(eps_prime))
    return LogQuantity(log_q), L


def lower_bound_list_size(R, eps, ell: int) -> int:
    """ell^floor(R / eps): every (1-R-eps, ell, L)-list-recoverable linear code has L above this."""
    R, eps = as_fraction(R), as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return ell ** math.floor(R / eps)


def johnson_radius(R, ell: int) -> tuple[float, bool]:
    """(max(0, 1 - sqrt(R ell)), clipped) where clipped flags R ell > 1."""
    x = float(as_fraction(R)) * ell
    return max(0.0, 1 - math.sqrt(x)), x > 1


def prop_lb_count(R, eps, ell: int) -> int:
    """ceil((1 - R) ell / eps) - 1 independent codewords fit in some ball of radius 1-R-eps."""
    R, eps = as_fraction(R), as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.ceil((1 - R) * ell / eps) - 1


def bounds_table(R, eps, ell: int, n: int | None = None, q: int | None = None,
                 eta=1, eps_prime=None) -> list[tuple[str, object, str]]:
    """Every calculator evaluated at one parameter point.

    Rows are ``(name, value, note)``; values are ints, floats or strings and
    the note carries feasibility flags or the violated precondition.
    """
    R, eps = as_fraction(R), as_fraction(eps)
    _check_capacity(R, eps)
    eps_prime = R / 2 if eps_prime is None else as_fraction(eps_prime)
    rows: list[tuple[str, object, str]] = []
    cap = rlc_capacity_params(R, eps, ell)

    def lq(name, x: LogQuantity, note=""):
        if x.exact is not None and x.exact.denominator == 1:
            rows.append((name, int(x.exact), note))
        else:
            rows.append((name + "_log2", round(x.log2_value, 9), note))

    rho = 1 - R - eps
    rows.append(("rho", f"{rho.numerator}/{rho.denominator}", "1 - R - eps"))
    lq("q_min", cap.q_min, "" if cap.q_min.desk_feasible else "desk-infeasible")
    lq("L_max", cap.L_max)
    rows.append(("lower_bound_L", lower_bound_list_size(R, eps, ell), "ell^floor(R/eps)"))
    rows.append(("prop_independent_count", prop_lb_count(R, eps, ell), "ceil((1-R) ell/eps) - 1"))
    jr, clipped = johnson_radius(R, ell)
    rows.append(("johnson_radius", round(jr, 12), "clipped" if clipped else ""))
    if n is not None:
        qq = q if q is not None else None
        rows.append(("failure_log2", round(cap.failure_log2(n, qq).log2_value, 9),
                     f"q={qq if qq else 'q_min'}"))
        if q is not None and q > ell:
            zp = zp_bad_config_log_prob(n, q, ell, R, eps)
            rows.append(("zp_first_line_log2", round(zp.first_line.log2_value, 9),
                         "" if zp.preconditions_met else "q below threshold"))
            rows.append(("zp_endpoint_log2", round(zp.endpoint.log2_value, 9), ""))
        L_int = int(cap.L_max.exact) if cap.L_max.exact is not None else None
        if L_int is not None:
            fam = lcl_family_log_size(n, rho, ell, L_int)
            rows.append(("lcl_family_log2", round(fam.log2_value, 9), f"L={L_int}"))
            if q is not None:
                try:
                    rhs = rs_transfer_rhs_log(L_int + 1, R - eps_prime, n, eps_prime, q, fam)
                    rows.append(("rs_transfer_rhs_log2", round(rhs.log2_value, 9), ""))
                except ValueError as e:
                    rows.append(("rs_transfer_rhs_log2", "n/a", str(e)))
        cor, L = rs_corollary_alphabet_log(R, eps, ell, eps_prime, eta, n)
        rows.append(("rs_alphabet_log2", float(f"{cor.log2_value:.12g}"),
                     "desk-feasible" if cor.desk_feasible else "desk-infeasible"))
    return rows
