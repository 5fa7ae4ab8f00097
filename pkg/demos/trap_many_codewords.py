"""Build a ball that traps ell^(m+1) codewords of a random linear code, then check it.

Run:  python3 demos/trap_many_codewords.py
"""
from __future__ import annotations

from fractions import Fraction

from listrecovery.algebra import GF
from listrecovery.certify import (build_lower_bound_certificate, dumps_certificate,
                                  loads_certificate, verify_lower_bound_certificate)
from listrecovery.codes import sample_rlc
from listrecovery.listrec import recover_list


def main() -> None:
    F = GF(5)
    code = sample_rlc(F, 20, 10, seed=1)
    eps = Fraction(21, 100)
    print(f"code: {code}, rate {code.rate}, eps {eps}")

    cert = build_lower_bound_certificate(code, ell=2, eps=eps)
    fam = cert.family
    print(f"k' = {fam.k_prime}, m = {fam.m}: {fam.m + 1} vectors with disjoint supports")
    for w, block in zip(fam.original(), fam.blocks):
        print(f"  block {block}: {' '.join(map(str, w))}")

    print(f"\nball of radius {cert.rho} (agree on >= {cert.ball.threshold} of {code.n})")
    for v in cert.trapped:
        print("  trapped:", " ".join(map(str, v)))

    report = verify_lower_bound_certificate(code, cert, brute_force=True)
    print()
    print("\n".join(report.lines()))

    # the exhaustive list may be larger than the certified one
    full = recover_list(code, cert.ball)
    print(f"\nexhaustive recovery finds {len(full)} codewords (span dimension {full.span_dim})")

    text = dumps_certificate(cert)
    assert dumps_certificate(loads_certificate(text)) == text
    print(f"certificate document: {len(text)} bytes, round trip is exact")


if __name__ == "__main__":
    main()
