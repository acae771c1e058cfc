"""L(k,n) on the conflict-free uniform game next to the closed form and the longest covering chain."""

import argparse
import csv
import sys

from coopcolor.game import uniform_game
from coopcolor.lattice import longest_chain
from coopcolor.stability import L1_formula, longest_sequence


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n1", type=int, default=14, help="largest n for the k=1 search")
    ap.add_argument("--n2", type=int, default=10, help="largest n for the k=2 search")
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout)
    w.writerow(["n", "formula", "chain", "dfs_k1", "dfs_k2"])
    for n in range(1, max(args.n1, args.n2) + 1):
        k1 = longest_sequence(uniform_game(n), 1).length if n <= args.n1 else ""
        k2 = longest_sequence(uniform_game(n), 2).length if n <= args.n2 else ""
        w.writerow([n, L1_formula(n), longest_chain(n), k1, k2])


if __name__ == "__main__":
    main()
