"""Command line surface: check / solve / member / oracle / gen.

Exit codes: 0 holds/exists/agreement, 1 fails/absence/disagreement,
2 usage or format error, 3 internal-consistency violation.
"""

import argparse
import json
import sys

from .values import INF, InputError, InternalConsistencyError, \
    value_from_json, value_to_json
from .game import Game, LassoPlay, REACHABILITY
from .strategy import Profile
from . import eqcheck, reach, prefixind, synthesis, oracle, gen

__version__ = "0.1.0"


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError("cannot read %s file %r: %s" % (what, path, exc))
    except json.JSONDecodeError as exc:
        raise InputError("invalid JSON in %s file %r: %s" % (what, path, exc))


def _load_game(path):
    return Game.from_json(_load_json(path, "game"))


def _emit(obj, path=None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_bounds(game, text):
    parts = text.split(",")
    if len(parts) != len(game.players):
        raise InputError("--bounds must list %d values, got %d"
                         % (len(game.players), len(parts)))
    bounds = {}
    for i, raw in zip(game.players, parts):
        raw = raw.strip()
        val = INF if raw == "inf" else value_from_json(
            int(raw) if raw.lstrip("-").isdigit() else raw)
        bounds[i] = val
    return bounds


def _check_mode(game, mode):
    if mode == "reach" and game.cost_kind != REACHABILITY:
        raise InputError("--mode reach requires a reachability game, the "
                         "game's cost kind is %r" % (game.cost_kind,))
    if mode == "prefix-ind" and game.cost_kind == REACHABILITY:
        raise InputError("--mode prefix-ind requires a liminf/limsup game")


def _dot(game, profile=None):
    shapes = {}
    for ix, p in enumerate(game.players):
        shapes[p] = ["circle", "square", "diamond", "hexagon"][ix % 4]
    thick = set()
    if profile is not None:
        for s in eqcheck.reachable_states(game, profile):
            ix = game.players.index(game.owner[s.vertex])
            w = profile.strategies[ix].choose(s.memories[ix], s.vertex)
            thick.add((s.vertex, w))
    lines = ["digraph G {"]
    for v in game.vertices:
        lines.append('  "%s" [shape=%s];' % (v, shapes[game.owner[v]]))
    for v in game.vertices:
        for w in game.succ[v]:
            attrs = []
            if game.cost_kind != REACHABILITY:
                attrs.append('label="%s"' % ",".join(
                    str(value_to_json(q)) for q in game.weights[(v, w)]))
            if (v, w) in thick:
                attrs.append("penwidth=3")
            lines.append('  "%s" -> "%s"%s;'
                         % (v, w, " [%s]" % ", ".join(attrs) if attrs
                            else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_check(args):
    game = _load_game(args.game)
    profile = Profile.from_json(game, _load_json(args.profile, "profile"))
    if args.kind == "ne":
        verdict = eqcheck.check_ne(game, profile)
    elif args.kind == "very-weak-spe":
        verdict = eqcheck.check_very_weak_spe(game, profile)
    else:
        verdict = eqcheck.check_weak_ne_bounded(game, profile, args.k)
    out = {"kind": verdict.kind, "holds": verdict.holds}
    if verdict.witness is not None:
        out["witness"] = _jsonable(verdict.witness)
    _emit(out)
    return 0 if verdict.holds else 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, bool)) or x is None:
        return x
    return value_to_json(x)


def _cmd_solve(args):
    game = _load_game(args.game)
    _check_mode(game, args.mode)
    if args.mode == "reach":
        report = reach.run_fixpoint(game)
        report_json = reach.report_to_json(game, report)
        ce = reach.constrained_existence
    else:
        report = prefixind.run_fixpoint(game)
        report_json = prefixind.report_to_json(game, report)
        ce = prefixind.constrained_existence
    target = None
    code = 0
    if args.bounds:
        bounds = _parse_bounds(game, args.bounds)
        witness = ce(game, report, bounds)
        if witness is None:
            report_json["constrained"] = None
            code = 1
        else:
            report_json["constrained"] = witness.to_json()
            target = witness
    if not report.exists:
        code = 1
    if args.emit_fixpoint:
        _emit(report_json, args.emit_fixpoint)
    if args.emit_profile and code == 0:
        profile = synthesis.synthesize(game, report, target)
        _emit(profile.to_json(), args.emit_profile)
    if args.emit_dot:
        with open(args.emit_dot, "w") as fh:
            fh.write(_dot(game))
    if not args.emit_fixpoint:
        _emit(report_json)
    return code


def _cmd_member(args):
    game = _load_game(args.game)
    lasso = LassoPlay.parse(args.lasso)
    if args.at and lasso.start() != args.at:
        raise InputError("lasso starts at %r, not at %r"
                         % (lasso.start(), args.at))
    if game.cost_kind == REACHABILITY:
        report = reach.run_fixpoint(game)
        ok = reach.membership(game, report.final_table,
                              frozenset(game.players), lasso)
    else:
        report = prefixind.run_fixpoint(game)
        ok = prefixind.membership(game, report.final_table, lasso)
    _emit({"lasso": lasso.to_json(), "member": ok})
    return 0 if ok else 1


def _tables_jsonable(game, tables):
    return [t.to_json(game) for t in tables]


def _cmd_oracle(args):
    game = _load_game(args.game)
    _check_mode(game, args.mode)
    universe = oracle.LassoUniverse.build(game, args.stem_max,
                                          args.cycle_max)
    orep = oracle.oracle_fixpoint(universe)
    if not args.compare:
        _emit({"iterations": _tables_jsonable(game, orep.tables)})
        return 0
    ref = _load_json(args.compare, "report")
    if game.cost_kind == REACHABILITY:
        ref_tables = [reach.CostBoundTable.from_json(t)
                      for t in ref["iterations"]]
    else:
        ref_tables = [prefixind.PrefixIndBoundTable.from_json(t)
                      for t in ref["iterations"]]
    n = max(len(ref_tables), len(orep.tables))
    agree = True
    for k in range(n):
        a = ref_tables[min(k, len(ref_tables) - 1)]
        b = orep.tables[min(k, len(orep.tables) - 1)]
        if not a.same_entries(b):
            agree = False
            break
    _emit({"agree": agree})
    return 0 if agree else 1


def _cmd_gen(args):
    mode = {"reach": "reachability", "liminf": "liminf",
            "limsup": "limsup"}[args.mode]
    game = gen.gen_game(args.seed, mode, max_vertices=args.max_vertices,
                        max_players=args.max_players)
    print(game.to_string())
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="spe-lab",
        description="Equilibrium checking, fixpoint solving and strategy "
                    "synthesis for quantitative games on graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; execution is "
                             "sequential and results are schedule-"
                             "independent")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="check a profile for an equilibrium "
                                     "property")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--kind", required=True,
                   choices=["ne", "very-weak-spe", "weak-ne-bounded"])
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve", help="run the fixpoint; optionally check "
                                     "constrained existence and synthesize")
    p.add_argument("--game", required=True)
    p.add_argument("--mode", required=True, choices=["reach", "prefix-ind"])
    p.add_argument("--bounds")
    p.add_argument("--emit-fixpoint")
    p.add_argument("--emit-profile")
    p.add_argument("--emit-dot")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("member", help="final-fixpoint membership probe for "
                                      "a lasso")
    p.add_argument("--game", required=True)
    p.add_argument("--lasso", required=True,
                   help='lasso as "stem|cycle", e.g. "v0,v1|v3"')
    p.add_argument("--at")
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("oracle", help="brute-force fixpoint over a lasso "
                                      "universe; optionally compare")
    p.add_argument("--game", required=True)
    p.add_argument("--mode", required=True, choices=["reach", "prefix-ind"])
    p.add_argument("--stem-max", type=int, default=8)
    p.add_argument("--cycle-max", type=int, default=8)
    p.add_argument("--compare")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate a random game")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="reach",
                   choices=["reach", "liminf", "limsup"])
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--max-players", type=int, default=3)
    p.set_defaults(func=_cmd_gen)

    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise InputError("--threads must be >= 1")
        return args.func(args)
    except InputError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print("internal consistency violation: %s" % (exc,), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
