"""Move counts, balance and realization status of the k=3 and k=4 cascades, as CSV."""

import argparse
import csv
import sys

from coopcolor import cascades


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k3", type=int, nargs="*", default=[4, 5, 6, 7, 8])
    ap.add_argument("--k4", type=int, nargs="*", default=[3, 4, 5])
    ap.add_argument("--realize", action="store_true", help="replay every sequence on a live partition")
    ap.add_argument("-o", "--out", help="CSV path (stdout if omitted)")
    args = ap.parse_args(argv)

    rows = []
    for k, ts in ((3, args.k3), (4, args.k4)):
        for row in cascades.measure_growth(ts, k):
            row["k"] = k
            if args.realize:
                if k == 3:
                    b = cascades.build_k3(row["t"])
                    seq, c, L = b.seq, b.c, b.L
                else:
                    ch = cascades.k4_chain(row["t"])
                    seq, c, L = ch.levels[-1].seq, max(ch.balances), ch.L
                row["realized"] = cascades.try_realize(seq, c, L, keep_steps=False).ok
            rows.append(row)
    fields = ["k", "t", "n", "c", "total_moves", "balance", "good_property_ok"] + (["realized"] if args.realize else [])
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
