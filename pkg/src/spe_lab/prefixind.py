"""Fixpoint over vertex-indexed play sets for prefix-independent costs.

Supported cost kinds: liminf and limsup of per-player edge weights (finite
range).  One refinement step is realized by a *bound-vector product*: a
finite automaton over states (vertex, per-player cost bound), where bounds
tighten (by min) at deviation edges using the previous table's aggregated
values.  Bounds are monotonically nonincreasing along a run, so every
product cycle carries one constant bound vector; a run is valid iff its
tail cycle's cost vector respects that vector.  Per-player maxima over
valid runs reduce to threshold scans over strongly connected components
of edge-filtered subgraphs.
"""

from dataclasses import dataclass

from .values import INF, NEG_INF, InputError, InternalConsistencyError, \
    value_to_json, value_from_json
from .game import LIMINF, LIMSUP, LassoPlay
from .eqcheck import _sccs
from .reach import FixpointReport


def _require_pi(game):
    if game.cost_kind not in (LIMINF, LIMSUP):
        raise InputError("prefix-independent fixpoint requires a liminf or "
                         "limsup game, got %r" % (game.cost_kind,))


@dataclass(frozen=True)
class PrefixIndBoundTable:
    """Lambda-bar: (vertex, first edge, player) -> max cost over the set;
    -inf encodes an empty play set."""

    entries: dict
    iteration: int

    def aggregated(self, game, v, i):
        return max(self.entries[(v, v2, i)] for v2 in game.succ[v])

    def same_entries(self, other):
        return self.entries == other.entries

    def to_json(self, game):
        rows = [{"from": v, "to": v2, "player": i,
                 "value": value_to_json(val)}
                for (v, v2, i), val in self.entries.items()]
        rows.sort(key=lambda r: (r["from"], r["to"], r["player"]))
        return {"iteration": self.iteration, "entries": rows}

    @staticmethod
    def from_json(obj):
        entries = {}
        for r in obj["entries"]:
            entries[(r["from"], r["to"], r["player"])] = \
                value_from_json(r["value"])
        return PrefixIndBoundTable(entries=entries, iteration=obj["iteration"])


def _no_constraint(w, j):
    return None


def _table_constraint(game, table):
    cache = {}

    def agg(w, j):
        key = (w, j)
        if key not in cache:
            val = table.aggregated(game, w, j)
            cache[key] = None if val == NEG_INF else val
        return cache[key]

    return agg


def _pstate_key(s):
    return (s[0], s[1])


def _transition(game, agg, state, w):
    """Product successor after edge (state vertex, w); None for non-edges."""
    u, B = state
    if not game.is_edge(u, w):
        return None
    j = game.owner[u]
    jx = game.players.index(j)
    B2 = list(B)
    for alt in game.succ[u]:
        if alt == w:
            continue
        a = agg(alt, j)
        if a is not None and a < B2[jx]:
            B2[jx] = a
    return (w, tuple(B2))


class BoundProduct:
    """Bound-vector product explored from one initial state."""

    def __init__(self, game, agg, state):
        self.game = game
        self.agg = agg
        self.s0 = state
        self.states = []
        self.edges = []        # (s, t, (u, w))
        seen = {state}
        queue = [state]
        self.states.append(state)
        while queue:
            s = queue.pop(0)
            for w in game.succ[s[0]]:
                t = _transition(game, agg, s, w)
                self.edges.append((s, t, (s[0], w)))
                if t not in seen:
                    seen.add(t)
                    self.states.append(t)
                    queue.append(t)

    @staticmethod
    def at_vertex(game, agg, v, bounds=None):
        B0 = tuple(bounds.get(i, INF) for i in game.players) if bounds \
            else tuple(INF for _ in game.players)
        return BoundProduct(game, agg, (v, B0))

    # -- valid-run analysis -------------------------------------------------

    def scc_data(self, keep):
        """SCCs of the subgraph of product edges whose game edge passes
        `keep`, each with its internal product edges."""
        adj = {}
        for (s, t, e) in self.edges:
            if keep(e):
                adj.setdefault(s, []).append(t)
        comps = _sccs(self.states, adj)
        comp_of = {}
        for c in comps:
            for n in c:
                comp_of[n] = c
        internal = {id(c): [] for c in comps}
        for (s, t, e) in self.edges:
            if keep(e) and comp_of[s] is comp_of[t]:
                internal[id(comp_of[s])].append((s, t, e))
        return [(c, internal[id(c)]) for c in comps]

    def scc_valid(self, scc, internal):
        """A closed walk covering the SCC's internal edges respects every
        player's (SCC-constant) bound vector."""
        if not internal:
            return False
        game = self.game
        B = next(iter(scc))[1]
        n = len(game.players)
        if game.cost_kind == LIMINF:
            return all(min(game.weights[e][ix] for (_s, _t, e) in internal)
                       <= B[ix] for ix in range(n))
        return all(game.weights[e][ix] <= B[ix]
                   for (_s, _t, e) in internal for ix in range(n))

    def best_value(self, i):
        """Max cost of player i over valid runs from s0, with the SCC that
        realizes it; (-inf, None) if no valid run exists."""
        game = self.game
        ix = game.players.index(i)
        if game.cost_kind == LIMINF:
            values = sorted({w[ix] for w in game.weights.values()},
                            reverse=True)
            for c in values:
                chosen = None
                for (scc, internal) in self.scc_data(
                        lambda e: game.weights[e][ix] >= c):
                    if self.scc_valid(scc, internal):
                        key = min(_pstate_key(s) for s in scc)
                        if chosen is None or key < chosen[0]:
                            chosen = (key, scc, internal)
                if chosen is not None:
                    return c, (chosen[1], chosen[2])
            return NEG_INF, None
        # limsup: only edges individually within the source state's bounds
        # can recur on a valid tail; the best value per SCC of that
        # subgraph is its top i-weight (achieved by a covering walk)
        n = len(game.players)

        def within(s, e):
            w = game.weights[e]
            B = s[1]
            return all(w[k] <= B[k] for k in range(n))

        adj = {}
        kept = []
        for (s, t, e) in self.edges:
            if within(s, e):
                adj.setdefault(s, []).append(t)
                kept.append((s, t, e))
        comps = _sccs(self.states, adj)
        comp_of = {}
        for c in comps:
            for node in c:
                comp_of[node] = c
        internal = {id(c): [] for c in comps}
        for (s, t, e) in kept:
            if comp_of[s] is comp_of[t]:
                internal[id(comp_of[s])].append((s, t, e))
        best = NEG_INF
        chosen = None
        for c in comps:
            ints = internal[id(c)]
            if not ints:
                continue
            top = max(game.weights[e][ix] for (_s, _t, e) in ints)
            key = min(_pstate_key(s) for s in c)
            if chosen is None or top > best or (top == best
                                                and key < chosen[0]):
                best = top
                chosen = (key, c, ints)
        if chosen is None:
            return NEG_INF, None
        return best, (chosen[1], chosen[2])


def _compute_table(game, agg, iteration):
    entries = {}
    for v in game.vertices:
        s0 = (v, tuple(INF for _ in game.players))
        for v2 in game.succ[v]:
            s1 = _transition(game, agg, s0, v2)
            sub = BoundProduct(game, agg, s1)
            for i in game.players:
                val, _scc = sub.best_value(i)
                entries[(v, v2, i)] = val
    return PrefixIndBoundTable(entries=entries, iteration=iteration)


def initial_table(game):
    """Lambda-bar over all plays (no erase constraints)."""
    _require_pi(game)
    return _compute_table(game, _no_constraint, 0)


def step(game, table):
    """One erase round against the previous table."""
    _require_pi(game)
    return _compute_table(game, _table_constraint(game, table),
                          table.iteration + 1)


def _covering_lasso(game, prod, scc, internal):
    """Stem from prod.s0 into the SCC plus a closed walk covering all of
    the SCC's internal edges, as a canonical vertex lasso."""
    # anchor the walk at a state that carries internal edges (the internal
    # set may cover only part of the SCC after limsup restriction)
    target = min((s for (s, _t, _e) in internal), key=_pstate_key)
    adj = {}
    for (s, t, _e) in sorted(prod.edges, key=lambda x: (_pstate_key(x[0]),
                                                        _pstate_key(x[1]))):
        adj.setdefault(s, []).append(t)
    parent = {prod.s0: None}
    queue = [prod.s0]
    while queue and target not in parent:
        s = queue.pop(0)
        for t in adj.get(s, ()):
            if t not in parent:
                parent[t] = s
                queue.append(t)
    if target not in parent:
        raise InternalConsistencyError("SCC unreachable from product root")
    stem_states = []
    cur = target
    while cur is not None:
        stem_states.append(cur)
        cur = parent[cur]
    stem_states.reverse()

    iadj = {}
    for (s, t, _e) in internal:
        iadj.setdefault(s, []).append(t)
    for s in iadj:
        iadj[s].sort(key=_pstate_key)

    def path(a, b):
        if a == b:
            return [a]
        par = {a: None}
        q = [a]
        while q:
            s = q.pop(0)
            for t in iadj.get(s, ()):
                if t not in par:
                    par[t] = s
                    if t == b:
                        out = [t]
                        while par[out[-1]] is not None:
                            out.append(par[out[-1]])
                        out.reverse()
                        return out
                    q.append(t)
        raise InternalConsistencyError("SCC not strongly connected")

    walk = [target]
    for (s, t, _e) in sorted(internal, key=lambda x: (_pstate_key(x[0]),
                                                      _pstate_key(x[1]))):
        seg = path(walk[-1], s)
        walk.extend(seg[1:])
        walk.append(t)
    seg = path(walk[-1], target)
    walk.extend(seg[1:])
    cycle_states = walk[:-1]

    stem = [s[0] for s in stem_states[:-1]]
    cycle = [s[0] for s in cycle_states]
    return LassoPlay.make(stem, cycle)


def run_fixpoint(game):
    """Iterate to the fixpoint; decide weak-SPE existence and extract
    maximal-cost witness lassos per (player, vertex)."""
    _require_pi(game)
    table = initial_table(game)
    per_iteration = [table]
    for _round in range(100000):
        new = step(game, table)
        if new.same_entries(table):
            break
        per_iteration.append(new)
        table = new
    else:
        raise InternalConsistencyError("fixpoint iteration did not stabilize")
    alpha_star = table.iteration

    agg = _table_constraint(game, table)
    nonempty = {}
    witnesses = {}
    witness_costs = {}
    defaults = {}
    for v in game.vertices:
        prod = BoundProduct.at_vertex(game, agg, v)
        got_any = False
        for i in game.players:
            val, chosen = prod.best_value(i)
            if chosen is None:
                continue
            got_any = True
            lasso = _covering_lasso(game, prod, chosen[0], chosen[1])
            got = game.cost_of(lasso, i)
            if got != val:
                raise InternalConsistencyError(
                    "witness for player %r at %r costs %r, table says %r"
                    % (i, v, got, val))
            witnesses[(i, v)] = lasso
            witness_costs[(i, v)] = val
            if v not in defaults:
                defaults[v] = lasso
        nonempty[v] = got_any

    reach_set = set()
    queue = [game.initial]
    while queue:
        u = queue.pop(0)
        if u in reach_set:
            continue
        reach_set.add(u)
        queue.extend(game.succ[u])
    exists = all(nonempty[v] for v in reach_set)

    return FixpointReport(mode=game.cost_kind, alpha_star=alpha_star,
                          final_table=table, per_iteration=per_iteration,
                          nonempty=nonempty, witnesses=witnesses,
                          witness_costs=witness_costs, defaults=defaults,
                          exists=exists)


def membership(game, table, lasso):
    """Does the lasso belong to the set at its start vertex, judged
    against `table`?  Prefix-independence makes this history-free."""
    _require_pi(game)
    game.validate_lasso(lasso)
    agg = _table_constraint(game, table)
    state = (lasso.start(), tuple(INF for _ in game.players))
    pos = 0
    seen = set()
    stem_len = len(lasso.stem)
    clen = len(lasso.cycle)
    while True:
        if pos >= stem_len:
            key = ((pos - stem_len) % clen, state)
            if key in seen:
                break
            seen.add(key)
        w = lasso.vertex_at(pos + 1)
        state = _transition(game, agg, state, w)
        pos += 1
    B = state[1]
    cost = game.cost(lasso)
    return all(cost[ix] <= B[ix] for ix in range(len(game.players)))


def constrained_existence(game, report, bounds):
    """A lasso in the final fixpoint set from v0 with cost <= bounds, or
    None.  `bounds`: mapping player -> value or INF."""
    _require_pi(game)
    table = report.final_table if isinstance(report, FixpointReport) \
        else report
    agg = _table_constraint(game, table)
    prod = BoundProduct.at_vertex(game, agg, game.initial, bounds=bounds)
    best = None
    for (scc, internal) in prod.scc_data(lambda e: True):
        ok = prod.scc_valid(scc, internal) if game.cost_kind == LIMINF \
            else _limsup_restrict(game, scc, internal) is not None
        if ok:
            key = min(_pstate_key(s) for s in scc)
            if best is None or key < best[0]:
                best = (key, scc, internal)
    if best is None:
        return None
    scc, internal = best[1], best[2]
    if game.cost_kind == LIMSUP:
        internal = _limsup_restrict(game, scc, internal)
    lasso = _covering_lasso(game, prod, scc, internal)
    cost = game.cost(lasso)
    for ix, i in enumerate(game.players):
        if cost[ix] > bounds.get(i, INF):
            raise InternalConsistencyError(
                "constrained witness violates bound for player %r" % (i,))
    return lasso


def _limsup_restrict(game, scc, internal):
    """For limsup, a valid closed walk must avoid edges above the bound
    vector; restrict the SCC to such edges and require that a strongly
    connected cover remains.  Returns the usable internal edge list, or
    None if no valid cycle exists in this SCC."""
    n = len(game.players)
    B = next(iter(scc))[1]
    kept = [(s, t, e) for (s, t, e) in internal
            if all(game.weights[e][ix] <= B[ix] for ix in range(n))]
    if not kept:
        return None
    # keep one SCC of the kept-edge subgraph
    adj = {}
    nodes = []
    for (s, t, _e) in kept:
        adj.setdefault(s, []).append(t)
        nodes.append(s)
        nodes.append(t)
    comps = _sccs(sorted(set(nodes), key=_pstate_key), adj)
    comp_of = {}
    for c in comps:
        for node in c:
            comp_of[node] = c
    for c in sorted(comps, key=lambda c: min(_pstate_key(s) for s in c)):
        ints = [(s, t, e) for (s, t, e) in kept
                if comp_of[s] is c and comp_of[t] is c]
        if ints:
            return ints
    return None


def report_to_json(game, report):
    wit = []
    for (i, v), lasso in sorted(report.witnesses.items()):
        wit.append({"player": i, "vertex": v, "lasso": lasso.to_json(),
                    "cost": value_to_json(report.witness_costs[(i, v)])})
    return {
        "mode": report.mode,
        "alpha_star": report.alpha_star,
        "iterations": [t.to_json(game) for t in report.per_iteration],
        "nonempty": [{"vertex": v, "value": bool(b)}
                     for v, b in sorted(report.nonempty.items())],
        "witnesses": wit,
        "exists": bool(report.exists),
    }
