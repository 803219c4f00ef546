#!/usr/bin/env python3
"""Print the discrete local height table on cycle models.

For the n-gon with D = P_i - P_0 and E = P_j - P_0 in distinct residue discs,
the pairing is i(n-j)/n; this script computes every entry from the
intersection-theoretic solve and marks agreement with the closed form.
"""

import pathlib
import sys
from fractions import Fraction

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from vologcalc.graphs import cycle_graph
from vologcalc.heights import discrete_height, divisor


def main(max_n: int = 12) -> None:
    for n in range(3, max_n + 1):
        g = cycle_graph(n)
        print(f"n = {n}")
        for i in range(1, n):
            row = []
            for j in range(i, n):
                D = divisor([("Pi", 1, i), ("P0", -1, 0)])
                E = divisor([("Pj", 1, j), ("P0b", -1, 0)])
                value = discrete_height(g, D, E, anchor=0)
                match = "" if value == Fraction(i * (n - j), n) else "  <-- MISMATCH"
                row.append(f"({i},{j})={value}{match}")
            print("   " + "  ".join(row))
        print()


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 12)
