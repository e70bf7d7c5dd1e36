"""Acceptance gate: one test per criterion, each printing an explicit
per-criterion PASS/FAIL line and enforcing its runtime budget."""

import random
import time

from spe_lab.game import LassoPlay
from spe_lab.strategy import Profile, outcome
from spe_lab.values import INF, InternalConsistencyError
from spe_lab import reach, prefixind, oracle, gen, eqcheck, synthesis
from tests.conftest import ACCEPTANCE_LINES, positional_profile


class _Criterion:
    def __init__(self, n, name, budget):
        self.n, self.name, self.budget = n, name, budget

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, et, ev, tb):
        elapsed = time.monotonic() - self.t0
        in_budget = self.budget is None or elapsed <= self.budget
        ok = et is None and in_budget
        line = ("criterion %d [%s]: %s (%.2fs)"
                % (self.n, self.name, "PASS" if ok else "FAIL", elapsed))
        print(line)
        # also surface the line in the terminal summary, past capture
        ACCEPTANCE_LINES.append(line)
        if et is None and not in_budget:
            raise AssertionError(
                "criterion %d exceeded its %.0fs budget (%.2fs)"
                % (self.n, self.budget, elapsed))
        return False


def _tables_agree(a_tables, b_tables):
    n = max(len(a_tables), len(b_tables))
    return all(a_tables[min(k, len(a_tables) - 1)].same_entries(
               b_tables[min(k, len(b_tables) - 1)]) for k in range(n))


def test_criterion_1_limsup_example_classification(limsup_ex, limsup_ex_profiles):
    with _Criterion(1, "running-example classification", 1.0):
        pr = lambda a, b: Profile.make(
            limsup_ex, {"p1": limsup_ex_profiles[a], "p2": limsup_ex_profiles[b]})
        p = pr("s1", "s2")
        assert eqcheck.check_ne(limsup_ex, p).holds
        assert limsup_ex.cost(outcome(limsup_ex, p)) == (3, 3)
        assert not eqcheck.check_very_weak_spe(limsup_ex, p).holds

        assert eqcheck.check_very_weak_spe(limsup_ex, pr("s1p", "s2p")).holds

        v = eqcheck.check_ne(limsup_ex, pr("s1", "s2p"))
        assert not v.holds and v.witness["player"] == "p1"

        p = pr("s1p", "s2")
        assert eqcheck.check_very_weak_ne(limsup_ex, p).holds
        assert not eqcheck.check_weak_ne_bounded(limsup_ex, p, 1).holds


def test_criterion_2_liminf_example_fixpoint(liminf_ex):
    with _Criterion(2, "liminf-example fixpoint", 1.0):
        rep = prefixind.run_fixpoint(liminf_ex)
        assert rep.alpha_star == 2
        t = rep.final_table
        assert prefixind.membership(liminf_ex, t, LassoPlay.parse("v0,v1|v3"))
        assert prefixind.membership(liminf_ex, t,
                                    LassoPlay.parse("v0,v1,v0,v1|v3"))
        assert not prefixind.membership(liminf_ex, t, LassoPlay.parse("v0|v2"))
        assert not prefixind.membership(liminf_ex, t, LassoPlay.parse("|v0,v1"))
        uni = oracle.LassoUniverse.build(liminf_ex, 8, 8)
        orep = oracle.oracle_fixpoint(uni)
        assert _tables_agree(orep.tables, rep.per_iteration)


def test_criterion_3_liminf_example_equilibrium_facts(liminf_ex, liminf_ex_thick_profile):
    with _Criterion(3, "liminf-example equilibria + synthesis", 1.0):
        assert eqcheck.check_very_weak_spe(liminf_ex, liminf_ex_thick_profile).holds
        v = eqcheck.check_ne(liminf_ex, liminf_ex_thick_profile)
        assert not v.holds
        assert v.witness["player"] == "p2"
        assert v.witness["best_response_value"] == 0
        assert v.witness["outcome_cost"] == 1
        rep = prefixind.run_fixpoint(liminf_ex)
        target = LassoPlay.parse("v0,v1|v3")
        prof = synthesis.synthesize(liminf_ex, rep, target)
        assert synthesis.audit(liminf_ex, prof, rep, target)


def test_criterion_4_reachability_existence():
    with _Criterion(4, "reachability existence + synthesis, 200 games", 60):
        for seed in range(200):
            game = gen.gen_game(seed, "reachability")
            try:
                rep = reach.run_fixpoint(game)
            except InternalConsistencyError as exc:
                raise AssertionError(
                    "seed %d: emptiness contradicts existence: %s"
                    % (seed, exc))
            prof = synthesis.synthesize(game, rep)
            assert eqcheck.check_very_weak_spe(game, prof).holds, \
                "seed %d: synthesized profile fails the subgame check" % seed


def test_criterion_5_oracle_equivalence():
    with _Criterion(5, "oracle equivalence, 400 games", 300):
        jobs = [(s, "reachability") for s in range(200)] + \
               [(s, ["liminf", "limsup"][s % 2]) for s in range(200)]
        for seed, mode in jobs:
            game = gen.gen_game(seed, mode)
            uni = oracle.LassoUniverse.build(game, 8, 8)
            orep = oracle.oracle_fixpoint(uni)
            rep = reach.run_fixpoint(game) if mode == "reachability" \
                else prefixind.run_fixpoint(game)
            assert _tables_agree(orep.tables, rep.per_iteration), \
                "seed %d %s: tables diverge" % (seed, mode)
            if mode == "reachability":
                for (I, v) in reach.reachable_strata(game):
                    fin = orep.final_sets[(I, v)]
                    for lp in uni.members[v]:
                        assert (lp in fin) == reach.membership(
                            game, rep.final_table, I, lp), \
                            "seed %d: membership diverges at %s" % (seed, lp)
            else:
                for v in game.vertices:
                    fin = orep.final_sets[v]
                    for lp in uni.members[v]:
                        assert (lp in fin) == prefixind.membership(
                            game, rep.final_table, lp), \
                            "seed %d: membership diverges at %s" % (seed, lp)


def test_criterion_6_constrained_existence(liminf_ex):
    with _Criterion(6, "constrained existence vs oracle, 50 games", 60):
        rep2 = prefixind.run_fixpoint(liminf_ex)
        assert prefixind.constrained_existence(
            liminf_ex, rep2, {"p1": 0, "p2": 1}) == LassoPlay.parse("v0,v1|v3")
        assert prefixind.constrained_existence(
            liminf_ex, rep2, {"p1": 0, "p2": 0}) is None

        for seed in range(50):
            mode = ["reachability", "liminf", "limsup"][seed % 3]
            game = gen.gen_game(seed, mode)
            rng = random.Random("bounds:%d" % seed)
            uni = oracle.LassoUniverse.build(game, 8, 8)
            orep = oracle.oracle_fixpoint(uni)
            if mode == "reachability":
                rep = reach.run_fixpoint(game)
                key = (frozenset(game.players), game.initial)
            else:
                rep = prefixind.run_fixpoint(game)
                key = game.initial
            pool = sorted(orep.final_sets[key],
                          key=lambda p: (p.stem, p.cycle))
            for _trial in range(4):
                bounds = {}
                for i in game.players:
                    if mode == "reachability":
                        bounds[i] = rng.choice([0, 1, 2, 3, INF])
                    else:
                        vals = game.value_range(i)
                        bounds[i] = rng.choice(vals + [vals[-1] + 1])
                oracle_says = any(
                    all(game.cost_of(p, i) <= bounds[i]
                        for i in game.players) for p in pool)
                if mode == "reachability":
                    wit = reach.constrained_existence(game, rep, bounds)
                else:
                    wit = prefixind.constrained_existence(game, rep, bounds)
                if oracle_says:
                    assert wit is not None, \
                        "seed %d: engine misses a witness the oracle has" \
                        % seed
                if wit is not None:
                    assert all(game.cost_of(wit, i) <= bounds[i]
                               for i in game.players)
                    if mode == "reachability":
                        assert reach.membership(
                            game, rep.final_table,
                            frozenset(game.players), wit)
                    else:
                        assert prefixind.membership(
                            game, rep.final_table, wit)
                    if len(wit.stem) <= 8 and len(wit.cycle) <= 8:
                        assert oracle_says, \
                            "seed %d: in-universe witness unseen by oracle" \
                            % seed


def test_criterion_7_one_shot_vs_bounded():
    with _Criterion(7, "one-shot/bounded deviation equivalence, "
                       "500 pairs", 120):
        for seed in range(500):
            mode = ["reachability", "liminf", "limsup"][seed % 3]
            game = gen.gen_game(seed, mode)
            prof = gen.gen_profile(game, seed)
            vw = eqcheck.check_very_weak_spe(game, prof).holds
            found = None
            for k in (1, 2, 3):
                wit = oracle.oracle_deviation_search(game, prof, 3, k)
                if wit is not None:
                    found = wit
                    break
            if vw:
                assert found is None, \
                    "seed %d: subgame-perfect profile admits a bounded " \
                    "deviation %r" % (seed, found)
            if found is not None:
                assert not vw, \
                    "seed %d: bounded deviation but the one-shot check " \
                    "holds" % seed


def test_criterion_8_invariant_suites(liminf_ex):
    with _Criterion(8, "invariant property suites", None):
        # lasso canonicalization / cost invariance under representation
        rng = random.Random("canon")
        for _k in range(300):
            stem = [rng.choice("abc") for _ in range(rng.randint(0, 5))]
            cyc = [rng.choice("abc") for _ in range(rng.randint(1, 5))]
            play = LassoPlay.make(stem, cyc)
            assert LassoPlay.make(play.stem, play.cycle) == play
            n = len(stem) + 3 * len(cyc)
            raw = (stem + cyc * (n // len(cyc) + 2))[:n]
            assert play.unroll(n) == raw
            r = rng.randrange(len(cyc))
            assert LassoPlay.make(stem + cyc[:r],
                                  cyc[r:] + cyc[:r]) == play

        # cost shift law on random games
        for seed in range(40):
            mode = ["reachability", "liminf", "limsup"][seed % 3]
            game = gen.gen_game(seed, mode)
            rng = random.Random("shift:%d" % seed)
            v = game.initial
            hist = []
            for _k in range(rng.randint(0, 4)):
                hist.append(v)
                v = rng.choice(sorted(game.succ[v]))
            walk, seen, u = [v], {v: 0}, v
            while True:
                u = rng.choice(sorted(game.succ[u]))
                if u in seen:
                    play = LassoPlay.make(walk[:seen[u]], walk[seen[u]:])
                    break
                seen[u] = len(walk)
                walk.append(u)
            assert game.shift_cost_identity_check(hist, play)

        # suffix closure of reachability witnesses
        for seed in range(40):
            game = gen.gen_game(seed, "reachability")
            rep = reach.run_fixpoint(game)
            for (i, I, v), lasso in rep.witnesses.items():
                S = I
                stem = list(lasso.stem)
                for k in range(len(stem)):
                    S = frozenset(j for j in S
                                  if stem[k] not in game.targets[j])
                    suffix = LassoPlay.make(stem[k + 1:], lasso.cycle)
                    assert reach.membership(game, rep.final_table, S,
                                            suffix)

        # cycle-constant bound vectors + table monotonicity (prefix-ind)
        for seed in range(40):
            mode = ["liminf", "limsup"][seed % 2]
            game = gen.gen_game(seed, mode)
            rep = prefixind.run_fixpoint(game)
            for prev, cur in zip(rep.per_iteration, rep.per_iteration[1:]):
                for key, val in cur.entries.items():
                    assert val <= prev.entries[key]
            agg = prefixind._table_constraint(game, rep.final_table)
            prod = prefixind.BoundProduct.at_vertex(game, agg, game.initial)
            for (scc, internal) in prod.scc_data(lambda e: True):
                if internal:
                    assert len({s[1] for s in scc}) == 1

        # table monotonicity (reachability)
        def rank(x):
            return (0, 0) if x == -1 else ((2, 0) if x == INF else (1, x))

        for seed in range(40):
            game = gen.gen_game(seed, "reachability")
            rep = reach.run_fixpoint(game)
            for prev, cur in zip(rep.per_iteration, rep.per_iteration[1:]):
                for key, val in cur.entries.items():
                    assert rank(val) <= rank(prev.entries[key])
