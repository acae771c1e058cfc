"""Command-line entry point.

Exit codes: 0 success, 1 malformed input, 2 a verification FAILed,
3 a search ran past its budget (INFEASIBLE).
"""

from __future__ import annotations

import argparse
import ast
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import cascades, efficiency, extensions, gallery, lattice, stability
from .config import DynamicsConfig, SearchConfig
from .dynamics import Scheduler, run_dynamics
from .game import NEG_INF, Partition, game_from_json, game_to_json, global_utility

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_INFEASIBLE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _js(x):
    if x is NEG_INF:
        return "-inf"
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if x is efficiency.Infinite or x is efficiency.Undefined:
        return str(x)
    return x


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps({"v": 1, "command": args.command, **payload}, sort_keys=True))
    else:
        print(text)


def _read_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{what}: cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{what}: invalid JSON at line {e.lineno}: {e.msg}") from e


def _load_game(path: str):
    d = _read_json(path, "game")
    try:
        return game_from_json(d)
    except ValueError as e:
        raise InputError(f"game file {path}: {e}") from e


def _load_partition(path: str, n: int) -> Partition:
    d = _read_json(path, "partition")
    groups = d.get("groups") if isinstance(d, dict) else None
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
        raise InputError("groups: expected a list of node lists")
    flat = sorted(u for g in groups for u in g)
    if flat != list(range(n)):
        raise InputError(f"groups: must cover nodes 0..{n - 1} exactly once")
    return Partition(tuple(tuple(g) for g in groups))


def _parse_h(spec: str):
    """indicator | eps:<fraction>"""
    if spec == "indicator":
        return extensions.Indicator()
    if spec.startswith("eps:"):
        try:
            return extensions.LinearEps(Fraction(spec[4:]))
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"h: bad epsilon in {spec!r}") from e
    raise InputError(f"h: expected 'indicator' or 'eps:<fraction>', got {spec!r}")


def _parse_param(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _groups(P) -> list:
    return [list(g) for g in P.groups]


# -- subcommands -------------------------------------------------------------------

def cmd_dynamics(args) -> int:
    game = _load_game(args.game)
    cfg = DynamicsConfig(args.k, args.policy, args.seed, args.max_steps, args.gossip)
    tr = run_dynamics(game, cfg.k, cfg.scheduler, max_steps=cfg.max_steps, gossip=cfg.gossip,
                      assert_potential=cfg.k == 1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(tr.to_jsonl())
    f = global_utility(game, tr.final) if tr.final is not None else None
    _emit(args, f"status={tr.status} steps={len(tr)}" + (f" f={_js(f)}" if f is not None else ""),
          {"status": tr.status, "steps": len(tr), "f": _js(f),
           "final": _groups(tr.final) if tr.final is not None else None})
    return EXIT_OK


def cmd_stability(args) -> int:
    game = _load_game(args.game)
    prune = args.search.prune_twins
    if args.mode == "exists":
        P = stability.exists_k_stable(game, args.k, args.gossip, args.budget, prune_twins=prune)
        _emit(args, "none" if P is None else json.dumps(_groups(P)),
              {"mode": "exists", "k": args.k, "partition": None if P is None else _groups(P)})
    elif args.mode == "all":
        Ps = stability.all_k_stable(game, args.k, args.gossip, args.budget, prune_twins=prune)
        text = "\n".join([f"count={len(Ps)}"] + [json.dumps(_groups(P)) for P in Ps])
        _emit(args, text, {"mode": "all", "k": args.k, "count": len(Ps),
                           "partitions": [_groups(P) for P in Ps]})
    elif args.mode == "check":
        if not args.partition:
            raise InputError("partition: --mode check needs --partition FILE")
        P = _load_partition(args.partition, game.n)
        ok = stability.is_k_stable(game, P, args.k, args.gossip)
        _emit(args, "stable" if ok else "not stable", {"mode": "check", "k": args.k, "stable": ok})
    else:
        r = stability.longest_sequence(game, args.k, args.budget)
        _emit(args, f"longest={r.length} states={r.states}",
              {"mode": "longest", "k": args.k, "length": r.length, "states": r.states})
    return EXIT_OK


def cmd_lattice(args) -> int:
    from .game import uniform_game
    n = args.n
    if n < 1:
        raise InputError("n: expected a positive integer")
    if args.mode == "chain":
        chain = lattice.longest_chain_witness(n)
        _emit(args, "\n".join(" ".join(map(str, q)) for q in chain),
              {"mode": "chain", "n": n, "length": len(chain) - 1, "chain": [list(q) for q in chain]})
        return EXIT_OK
    if args.mode == "verify":
        chain = lattice.longest_chain(n)
        formula = stability.L1_formula(n)
        dfs = stability.longest_sequence(uniform_game(n), 1, args.budget).length
        ok = chain == formula == dfs
        _emit(args, f"chain={chain} formula={formula} dfs={dfs} {'OK' if ok else 'FAIL'}",
              {"mode": "verify", "n": n, "chain": chain, "formula": formula, "dfs": dfs,
               "status": "PASS" if ok else "FAIL"})
        return EXIT_OK if ok else EXIT_FAIL
    rows = [{"n": m, "partitions": stability.integer_partition_count(m),
             "L1": stability.L1_formula(m), "chain": lattice.longest_chain(m)} for m in range(1, n + 1)]
    text = "\n".join(["n partitions L1 chain"] +
                     [f"{r['n']} {r['partitions']} {r['L1']} {r['chain']}" for r in rows])
    _emit(args, text, {"mode": "table", "rows": rows})
    return EXIT_OK


def cmd_cascade(args) -> int:
    t = args.t
    try:
        return _cascade(args, t)
    except ValueError as e:
        raise InputError(f"t: {e}") from e
    except cascades.ClaimViolation as e:
        _emit(args, f"FAIL {e}", {"status": "FAIL", "detail": str(e)})
        return EXIT_FAIL


def _cascade(args, t) -> int:
    if args.k == 3:
        b = cascades.build_k3(t)
        moves, bal, seq, c, L = len(b.seq), b.balance, b.seq, b.c, b.L
        extra = {}
    else:
        ch = cascades.k4_chain(t)
        seq = ch.levels[-1].seq
        moves, bal, c, L = len(seq), max(ch.balances), max(ch.balances), ch.L
        extra = {"levels": [{"i": lv.i, "moves": len(lv.seq), "s": lv.s, "balance": x,
                             "symmetric": cascades.is_symmetric(lv.vec),
                             "good_property": cascades.good_property(lv.vec, ch.L, lv.s, lv.i)}
                            for lv, x in zip(ch.levels, ch.balances)]}
    realized = None
    if args.realize:
        rep = cascades.try_realize(seq, c, L, keep_steps=False)
        realized = "OK" if rep.ok else f"FAIL({rep.error})"
    if args.csv:
        rows = cascades.measure_growth([t], args.k)
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["t", "n", "c", "total_moves", "balance", "good_property_ok"],
                               extrasaction="ignore")
            w.writeheader()
            w.writerows(rows)
    text = f"moves={moves} balance={bal}" + (f" realized={realized}" if realized else "")
    _emit(args, text, {"k": args.k, "t": t, "moves": moves, "balance": bal, "L": L, "c": c,
                       "realized": realized, **extra})
    if realized is not None and realized != "OK":
        return EXIT_FAIL
    return EXIT_OK


def cmd_gallery(args) -> int:
    params = [_parse_param(p) for p in (args.params or [])]
    if args.action == "list":
        names = sorted(gallery.REGISTRY)
        _emit(args, "\n".join(names), {"entries": names})
        return EXIT_OK
    if args.name not in gallery.REGISTRY:
        raise InputError(f"name: unknown gallery entry {args.name!r}")
    try:
        if args.action == "build":
            g = gallery.build(args.name, *params)
        else:
            cl = gallery.claims(args.name, *params)
    except (TypeError, ValueError) as e:
        raise InputError(f"params: {e}") from e
    if args.action == "build":
        d = game_to_json(g)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(d, fh)
            _emit(args, f"wrote {args.out} n={g.n}", {"name": args.name, "n": g.n, "path": args.out})
        else:
            print(json.dumps(d))
        return EXIT_OK
    with ThreadPoolExecutor(max_workers=args.search.threads) as ex:
        verdicts = list(ex.map(lambda c: gallery.verify(c, args.budget), cl))
    _emit(args, "\n".join(v.line() for v in verdicts),
          {"name": args.name, "verdicts": [{"claim": v.claim, "status": v.status,
                                            "seconds": round(v.seconds, 3), "detail": v.detail}
                                           for v in verdicts]})
    statuses = {v.status for v in verdicts}
    if gallery.FAIL in statuses:
        return EXIT_FAIL
    if gallery.INFEASIBLE in statuses:
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_poa(args) -> int:
    game = _load_game(args.game)
    if args.q == 1:
        w = efficiency.worst_k_stable(game, args.k, args.budget)
        _, best = efficiency.max_partition(game, args.budget)
        worst = None if w is None else w[1]
        ratio = efficiency.Undefined if w is None else efficiency._ratio(best, worst)
    else:
        ratio, best, worst = efficiency.config_price_of_anarchy(game, _parse_h(args.h), args.q, args.k, args.budget)
    _emit(args, f"poa={_js(ratio)} best={_js(best)} worst_stable={_js(worst)}",
          {"k": args.k, "q": args.q, "poa": _js(ratio), "best": _js(best), "worst_stable": _js(worst)})
    return EXIT_OK


def cmd_hyper(args) -> int:
    d = _read_json(args.game, "hypergame")
    try:
        H = extensions.HyperGame.from_json(d)
    except ValueError as e:
        raise InputError(f"hypergame file {args.game}: {e}") from e
    girth = extensions.berge_girth(H)
    acyclic = girth == float("inf")
    identity = extensions.acyclic_count_check(H) if acyclic else None
    tr = extensions.run_hyper_dynamics(H, Scheduler(args.policy, args.seed), args.k, args.max_steps)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(tr.to_jsonl())
    phi = extensions.hyper_potential(H, tr.final) if tr.final is not None else None
    _emit(args, f"status={tr.status} steps={len(tr)} phi={_js(phi)} berge_girth={girth}"
          + ("" if identity is None else f" acyclic_identity={'OK' if identity else 'FAIL'}"),
          {"status": tr.status, "steps": len(tr), "phi": _js(phi),
           "berge_girth": "inf" if acyclic else girth, "acyclic_identity": identity})
    return EXIT_FAIL if identity is False else EXIT_OK


def cmd_multichannel(args) -> int:
    game = _load_game(args.game)
    h = _parse_h(args.h)
    q = args.q
    if args.mode == "dynamics":
        tr = extensions.run_multichannel_dynamics(game, h, q, Scheduler(args.policy, args.seed),
                                                  max_steps=args.max_steps, k=args.k)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(tr.to_jsonl())
        f = extensions.config_global_utility(game, h, tr.final) if tr.final is not None else None
        _emit(args, f"status={tr.status} steps={len(tr)} f={_js(f)}",
              {"status": tr.status, "steps": len(tr), "f": _js(f),
               "final": tr.final.to_json() if tr.final is not None else None})
    elif args.mode == "exists":
        C = extensions.exists_k_stable_config(game, h, q, args.k, args.budget)
        _emit(args, "none" if C is None else json.dumps(C.to_json()["membership"]),
              {"k": args.k, "q": q, "configuration": None if C is None else C.to_json()})
    elif args.mode == "max":
        C, f = extensions.max_configuration(game, h, q, args.budget)
        _emit(args, f"max={_js(f)} {json.dumps(C.to_json()['membership'])}",
              {"q": q, "max": _js(f), "configuration": C.to_json()})
    else:
        if args.target is None:
            raise InputError("target: --mode min-channels needs --target U")
        try:
            qq = extensions.min_channels(game, h, Fraction(args.target), budget=args.budget)
        except extensions.NotAchievable as e:
            _emit(args, f"unreachable: {e}", {"target": args.target, "min_channels": None})
            return EXIT_OK
        _emit(args, f"min_channels={qq}", {"target": args.target, "min_channels": qq})
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def _global_flags(p, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="RNG seed for random schedulers")
    p.add_argument("--budget", type=int, default=d(stability.DEFAULT_BUDGET),
                   help="cap on enumerated candidates; exceeding it reports INFEASIBLE (exit 3)")
    p.add_argument("--json", action="store_true", default=d(False), help="print one JSON object")
    p.add_argument("--threads", type=int, default=d(1),
                   help="worker threads for claim verification; results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coopcolor", description="Cooperative coloring games toolkit.")
    _global_flags(p, False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, True)
        return sp

    sp = add("dynamics", "run deviation dynamics; cycles are caught by a visited-state set "
                         "that degrades to a ring of recent states past 1e6 entries")
    sp.add_argument("--game", required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--policy", default="firstlex", choices=["firstlex", "random", "mincoalition", "maxgain"])
    sp.add_argument("--max-steps", type=int, default=100_000)
    sp.add_argument("--gossip", action="store_true")
    sp.add_argument("-o", "--out", help="trace JSONL path")

    sp = add("stability", "search for k-stable partitions")
    sp.add_argument("--game", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", default="exists", choices=["exists", "all", "check", "longest"])
    sp.add_argument("--partition", help="partition JSON {\"v\":1,\"groups\":[[...]]} for --mode check")
    sp.add_argument("--gossip", action="store_true")
    sp.add_argument("--no-twins", action="store_true", help="disable twin-class pruning")

    sp = add("lattice", "dominance lattice of integer partitions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", default="verify", choices=["chain", "verify", "table"])

    sp = add("cascade", "long k-deviation sequences for k=3 and k=4")
    sp.add_argument("--k", type=int, required=True, choices=[3, 4])
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--realize", action="store_true")
    sp.add_argument("--csv")

    sp = add("gallery", "build or verify counterexamples and reductions")
    sp.add_argument("action", choices=["build", "verify", "list"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--params", nargs="*", help="positional builder parameters (Python literals)")
    sp.add_argument("-o", "--out")

    sp = add("poa", "price of anarchy by exhaustive search")
    sp.add_argument("--game", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--h", default="indicator", help="indicator | eps:<fraction>")

    sp = add("hyper", "hypergraph game dynamics and Berge girth")
    sp.add_argument("--game", required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--policy", default="firstlex", choices=["firstlex", "random", "mincoalition", "maxgain"])
    sp.add_argument("--max-steps", type=int, default=100_000)
    sp.add_argument("-o", "--out")

    sp = add("multichannel", "q-channel configurations")
    sp.add_argument("--game", required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--h", default="indicator", help="indicator | eps:<fraction>")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--mode", default="dynamics", choices=["dynamics", "exists", "max", "min-channels"])
    sp.add_argument("--target", help="utility target for --mode min-channels")
    sp.add_argument("--policy", default="firstlex", choices=["firstlex", "random", "mincoalition", "maxgain"])
    sp.add_argument("--max-steps", type=int, default=100_000)
    sp.add_argument("-o", "--out")
    return p


COMMANDS = {"dynamics": cmd_dynamics, "stability": cmd_stability, "lattice": cmd_lattice,
            "cascade": cmd_cascade, "gallery": cmd_gallery, "poa": cmd_poa, "hyper": cmd_hyper,
            "multichannel": cmd_multichannel}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.search = SearchConfig(args.budget, args.threads, not getattr(args, "no_twins", False))
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "gallery" and args.action != "list" and not args.name:
        print("error: name: gallery build/verify needs an entry name", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except stability.SearchTooLarge as e:
        _emit(args, f"INFEASIBLE {e}", {"status": "INFEASIBLE", "detail": str(e)})
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
