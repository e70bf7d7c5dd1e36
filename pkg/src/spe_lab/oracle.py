"""Brute-force reference implementations over finite lasso universes.

The oracle applies the erase operator literally to an exhaustively
enumerated set of canonical lassos, and searches bounded deviations by
explicit graph exploration.  It exists to cross-validate the engines on
desk-scale instances, not to scale.

Deviation positions are checked in the stem plus TWO cycle unrollings:
survivor sets stabilize by the end of the first unrolling (a first target
visit happens at a first vertex occurrence), so every (vertex, survivors)
context occurring at any later position already occurs in the second
unrolling with a smaller elapsed index, where the reachability erase test
is at its strongest; the prefix-independent test does not depend on the
elapsed index at all.
"""

from dataclasses import dataclass

from .values import INF, NEG_INF
from .game import REACHABILITY, LIMINF, LassoPlay
from .reach import CostBoundTable, reachable_strata
from .prefixind import PrefixIndBoundTable
from .eqcheck import _sccs


@dataclass
class LassoUniverse:
    """All canonical lassos of a game within stem/cycle vertex bounds,
    indexed by start vertex."""

    game: object
    stem_max: int
    cycle_max: int
    members: dict   # start vertex -> sorted list of LassoPlay

    @staticmethod
    def build(game, stem_max, cycle_max):
        members = {}
        for v in game.vertices:
            found = set()
            stems = [[v]]
            frontier = [[v]]
            # walks usable as stems (including the empty stem, implicitly)
            while frontier:
                nxt = []
                for walk in frontier:
                    if len(walk) < stem_max:
                        for w in game.succ[walk[-1]]:
                            walk2 = walk + [w]
                            stems.append(walk2)
                            nxt.append(walk2)
                frontier = nxt

            def cycles_from(c0):
                out = []
                stack = [[c0]]
                while stack:
                    walk = stack.pop()
                    if game.is_edge(walk[-1], c0):
                        out.append(walk)
                    if len(walk) < cycle_max:
                        for w in game.succ[walk[-1]]:
                            stack.append(walk + [w])
                return out

            cyc_cache = {}
            for stem in [[]] + stems:
                anchors = [v] if not stem else list(game.succ[stem[-1]])
                for c0 in anchors:
                    if c0 not in cyc_cache:
                        cyc_cache[c0] = cycles_from(c0)
                    for cyc in cyc_cache[c0]:
                        found.add(LassoPlay.make(stem, cyc))
            members[v] = sorted(found, key=lambda p: (p.stem, p.cycle))
        return LassoUniverse(game=game, stem_max=stem_max,
                             cycle_max=cycle_max, members=members)


@dataclass
class OracleReport:
    """Per-iteration set families and bound tables from the literal erase."""

    tables: list        # engine-compatible table objects, iteration 0..
    final_sets: dict    # stratum key (reach) / vertex (pi) -> set of lassos


class _LassoData:
    """Precomputed per-lasso facts for fast erase checks."""

    def __init__(self, game, play):
        self.play = play
        n_pos = len(play.stem) + 2 * len(play.cycle)
        seq = play.unroll(n_pos + 1)
        self.first = seq[1]
        cost = game.cost(play)
        self.cost = {i: cost[ix] for ix, i in enumerate(game.players)}
        self.positions = []
        for n in range(n_pos):
            u = seq[n]
            j = game.owner[u]
            alts = tuple(w for w in game.succ[u] if w != seq[n + 1])
            if not alts:
                continue
            if game.cost_kind == REACHABILITY:
                alive = frozenset(i for i in game.players
                                  if self.cost[i] > n)
                if j not in alive:
                    continue
                self.positions.append((n, j, alive, alts))
            else:
                self.positions.append((n, j, None, alts))


def oracle_fixpoint(universe):
    game = universe.game
    if game.cost_kind == REACHABILITY:
        return _oracle_reach(universe)
    return _oracle_pi(universe)


def _oracle_reach(universe):
    game = universe.game
    data = {v: [_LassoData(game, p) for p in universe.members[v]]
            for v in game.vertices}
    strata = reachable_strata(game)
    sets = {(I, v): set(range(len(data[v]))) for (I, v) in strata}

    def build_table(iteration):
        entries = {}
        for (I, v) in strata:
            for v2 in game.succ[v]:
                for i in game.players:
                    if i not in I:
                        entries[(I, v, v2, i)] = -1
                        continue
                    best = -1
                    for ix in sets[(I, v)]:
                        d = data[v][ix]
                        if d.first != v2:
                            continue
                        c = d.cost[i]
                        if c > best:
                            best = c
                    entries[(I, v, v2, i)] = best
        return CostBoundTable(entries=entries, iteration=iteration)

    tables = [build_table(0)]
    for _round in range(10000):
        # snapshot aggregated maxima of the current sets
        agg = {}
        for (I, v) in strata:
            here = sets[(I, v)]
            for i in I:
                if not here:
                    agg[(I, v, i)] = None
                else:
                    agg[(I, v, i)] = max(data[v][ix].cost[i] for ix in here)
        changed = False
        for (I, v) in strata:
            erased = set()
            for ix in sets[(I, v)]:
                d = data[v][ix]
                if _erased_reach(d, I, agg):
                    erased.add(ix)
            if erased:
                sets[(I, v)] -= erased
                changed = True
        if not changed:
            break
        tables.append(build_table(len(tables)))
    final = {(I, v): {data[v][ix].play for ix in sets[(I, v)]}
             for (I, v) in strata}
    return OracleReport(tables=tables, final_sets=final)


def _erased_reach(d, I, agg):
    for (n, j, alive, alts) in d.positions:
        if j not in I:
            continue
        S = I & alive
        if j not in S:
            continue
        cj = d.cost[j]
        for v2 in alts:
            a = agg.get((S, v2, j))
            if a is None or a == INF:
                continue
            if cj > a + n + 1:
                return True
    return False


def _oracle_pi(universe):
    game = universe.game
    data = {v: [_LassoData(game, p) for p in universe.members[v]]
            for v in game.vertices}
    sets = {v: set(range(len(data[v]))) for v in game.vertices}

    def build_table(iteration):
        entries = {}
        for v in game.vertices:
            for v2 in game.succ[v]:
                for i in game.players:
                    vals = [data[v][ix].cost[i] for ix in sets[v]
                            if data[v][ix].first == v2]
                    entries[(v, v2, i)] = max(vals) if vals else NEG_INF
        return PrefixIndBoundTable(entries=entries, iteration=iteration)

    tables = [build_table(0)]
    for _round in range(10000):
        agg = {}
        for v in game.vertices:
            for i in game.players:
                here = sets[v]
                agg[(v, i)] = max((data[v][ix].cost[i] for ix in here),
                                  default=None)
        changed = False
        for v in game.vertices:
            erased = set()
            for ix in sets[v]:
                d = data[v][ix]
                stop = False
                for (n, j, _alive, alts) in d.positions:
                    cj = d.cost[j]
                    for v2 in alts:
                        a = agg.get((v2, j))
                        if a is None:
                            continue
                        if cj > a:
                            stop = True
                            break
                    if stop:
                        break
                if stop:
                    erased.add(ix)
            if erased:
                sets[v] -= erased
                changed = True
        if not changed:
            break
        tables.append(build_table(len(tables)))
    final = {v: {data[v][ix].play for ix in sets[v]} for v in game.vertices}
    return OracleReport(tables=tables, final_sets=final)


# -- bounded deviation oracle ------------------------------------------------


def oracle_deviation_search(game, profile, subgame_depth, deviation_budget):
    """Exhaustive search for a profitable <=budget-step deviation in any
    subgame of depth <= subgame_depth; first witness in canonical order."""
    histories = [[game.initial]]
    frontier = [[game.initial]]
    for _d in range(subgame_depth):
        nxt = []
        for h in frontier:
            for w in sorted(game.succ[h[-1]]):
                h2 = h + [w]
                histories.append(h2)
                nxt.append(h2)
        frontier = nxt
    for h in histories:
        for i in game.players:
            wit = _subgame_improvement(game, profile, i, h,
                                       deviation_budget)
            if wit is not None:
                wit["history"] = list(h)
                wit["player"] = i
                return wit
    return None


def _budget_graph(game, profile, i, h, budget):
    """Graph over (vertex, memory vector, remaining budget): the deviator
    moves freely while budget remains, everyone else follows the profile."""
    ix = game.players.index(i)
    mems = profile.initial_memories()
    for u in h:
        mems = profile.step_memories(mems, u)
    root = (h[-1], mems, budget)
    seen = {root}
    order = [root]
    queue = [root]
    edges = []
    while queue:
        s = queue.pop(0)
        v, ms, b = s
        prescribed = profile[game.owner[v]].choose(
            ms[game.players.index(game.owner[v])], v)
        moves = []
        if game.owner[v] == i:
            for w in game.succ[v]:
                if w == prescribed:
                    moves.append((w, b))
                elif b > 0:
                    moves.append((w, b - 1))
        else:
            moves.append((prescribed, b))
        for (w, b2) in moves:
            t = (w, profile.step_memories(ms, w), b2)
            edges.append((s, t, (v, w)))
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order, edges, root, ix


def _subgame_improvement(game, profile, i, h, budget):
    order, edges, root, ix = _budget_graph(game, profile, i, h, budget)
    from .strategy import outcome
    base_play = outcome(game, profile, h[-1], prior=h)
    if game.cost_kind == REACHABILITY:
        t = game.targets[i]
        if any(u in t for u in h[:-1]):
            return None       # cost fixed by the history already
        base = next((n for n, u in enumerate(base_play.unroll(
            len(base_play.stem) + len(base_play.cycle))) if u in t), INF)
        if root[0] in t:
            return None
        dist = {root: 0}
        queue = [root]
        adj = {}
        for (a, b2, _e) in edges:
            adj.setdefault(a, []).append(b2)
        best = INF
        while queue:
            s = queue.pop(0)
            for b2 in adj.get(s, ()):
                if b2 not in dist:
                    dist[b2] = dist[s] + 1
                    if b2[0] in t:
                        best = min(best, dist[b2])
                    queue.append(b2)
        if best < base:
            return {"improved_cost": best, "outcome_cost": base}
        return None
    base = game.cost_of(base_play, i)
    adj = {}
    for (a, b2, _e) in edges:
        adj.setdefault(a, []).append(b2)
    comps = _sccs(order, adj)
    comp_of = {}
    for c in comps:
        for n in c:
            comp_of[n] = c
    best = None
    if game.cost_kind == LIMINF:
        for (a, b2, e) in edges:
            if comp_of[a] is comp_of[b2]:
                val = game.weight(e[0], e[1], i)
                if best is None or val < best:
                    best = val
    else:
        for c in sorted(game.value_range(i)):
            sub = {}
            for (a, b2, e) in edges:
                if game.weight(e[0], e[1], i) <= c:
                    sub.setdefault(a, []).append(b2)
            comps2 = _sccs(order, sub)
            cof = {}
            for cc in comps2:
                for n in cc:
                    cof[n] = cc
            ok = any(cof[a] is cof[b2] for (a, b2, e) in edges
                     if game.weight(e[0], e[1], i) <= c)
            if ok:
                best = c
                break
    if best is not None and best < base:
        return {"improved_cost": best, "outcome_cost": base}
    return None
