"""Evaluate the bound calculators at one parameter point.

Most of these quantities are astronomically large, so they are carried as
base-2 logarithms; small ones also keep their exact value.

Run:  python3 demos/bounds_tour.py
"""
from __future__ import annotations

from fractions import Fraction

from listrecovery.bounds import bounds_table, johnson_radius, zp_bad_config_log_prob


def main() -> None:
    R, eps, ell = Fraction(1, 4), Fraction(1, 2), 2
    for name, value, note in bounds_table(R, eps, ell, n=100):
        print(f"{name:<26} {value!s:<24} {note}")

    radius, clipped = johnson_radius(R, ell)
    print(f"\nJohnson radius for R={R}, ell={ell}: {radius:.4f}" + (" (clipped)" if clipped else ""))

    q = 2**10
    b = zp_bad_config_log_prob(40, q, ell, R, eps)
    print(f"\nunion bound over bad configurations, n=40, q={q}, L={b.L}")
    for step, v in zip(("first line", "entropy", "rate", "collapsed", "endpoint"), b.chain):
        print(f"  {step:<11} log2 = {v:12.2f}")
    print(f"  preconditions met: {b.preconditions_met}")


if __name__ == "__main__":
    main()
