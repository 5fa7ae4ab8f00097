"""How often is a random linear code's relative distance at least 1 - R - eps/2?

Run:  python3 demos/random_code_distance.py
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction

from listrecovery.algebra import GF
from listrecovery.codes import min_distance, sample_random_rs, sample_rlc


def main() -> None:
    F = GF(2, 4)
    n, k, eps, trials = 16, 4, Fraction(1, 2), 300
    target = 1 - Fraction(k, n) - eps / 2
    dists = Counter(min_distance(sample_rlc(F, n, k, seed=0, trial=t))[0] for t in range(trials))
    hits = sum(c for d, c in dists.items() if Fraction(d, n) >= target)
    print(f"GF(16), n={n}, k={k}: distance histogram {dict(sorted(dists.items()))}")
    print(f"relative distance >= {target}: {hits}/{trials}")

    # Reed-Solomon codes on distinct points meet the Singleton bound
    G13 = GF(13)
    ds = [min_distance(sample_random_rs(G13, 12, 4, seed=s, distinct=True)[0])[0] for s in range(10)]
    print(f"RS over GF(13), n=12, k=4: distances {ds} (n - k + 1 = 9)")


if __name__ == "__main__":
    main()
