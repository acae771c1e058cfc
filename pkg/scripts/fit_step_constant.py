"""Largest steps/n^2 over random k<=2 runs with weights in {-inf, 0, 1} plus negative integers."""

import argparse
import random

from coopcolor.dynamics import Scheduler, run_dynamics
from coopcolor.game import NEG_INF, Game


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--games", type=int, default=2000)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    weights = (NEG_INF, 0, 1, -1, -3)
    worst = (0.0, None)
    for i in range(args.games):
        n = rng.randint(2, args.max_n)
        W = {(u, v): rng.choice(weights) for u in range(n) for v in range(u + 1, n)}
        g = Game(n, W, frozenset(weights))
        for k in (1, 2):
            tr = run_dynamics(g, k, Scheduler(rng.choice(["firstlex", "random", "maxgain"]), i))
            ratio = len(tr) / n ** 2
            if ratio > worst[0]:
                worst = (ratio, (n, k, len(tr)))
    print(f"max steps/n^2 = {worst[0]:.3f} at (n, k, steps) = {worst[1]}")


if __name__ == "__main__":
    main()
