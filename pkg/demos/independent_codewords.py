"""Place m linearly independent codewords in one recovery ball.

The lists hold {0, 1} on the systematic coordinates and, on each parity
coordinate, the symbols of a sliding window of ell of the m codewords.

Run:  python3 demos/independent_codewords.py
"""
from __future__ import annotations

from fractions import Fraction

from listrecovery.algebra import GF
from listrecovery.certify import (ConstructionError, build_independent_subset_certificate,
                                  verify_independent_subset_certificate)
from listrecovery.codes import sample_rlc
from listrecovery.listrec import independent_in_ball


def main() -> None:
    F = GF(2, 3)
    code = sample_rlc(F, 16, 8, seed=0)
    cert = build_independent_subset_certificate(code, ell=2, eps=Fraction(1, 4))
    print(f"m = {cert.m} codewords, radius {cert.ball.rho}, threshold {cert.ball.threshold}")
    for v, c in zip(cert.vectors, cert.agreement_counts):
        print(f"  {' '.join(map(str, v))}   agrees on {c}")
    print("\n".join(verify_independent_subset_certificate(code, cert, brute_force=False).lines()))

    dim, _ = independent_in_ball(code, cert.ball)
    print(f"exhaustive search: code and ball span dimension {dim}")

    # short codes leave too few parity coordinates for the windows
    try:
        build_independent_subset_certificate(sample_rlc(F, 4, 3, seed=0), 2, Fraction(1, 7))
    except ConstructionError as e:
        print(f"\nn = 4 fails as expected: {e}")


if __name__ == "__main__":
    main()
