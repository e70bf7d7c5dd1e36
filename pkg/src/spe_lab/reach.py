"""Fixpoint over survivor-indexed play sets for quantitative reachability.

The play sets are never materialized.  Each iteration is represented by a
cost-bound table: the per-stratum, per-first-edge maximum of every
surviving player's cost over the current set.  One refinement step is
realized by a *deadline product*: a finite automaton over states
(vertex, survivor set, per-player residual deadline) whose valid infinite
runs are exactly the plays that survive one erase round against the
previous table.  Deadlines are created at deviation edges from the
previous table's aggregated bounds, tick down every edge, and are
discharged when the player reaches their target; a finite deadline can
never survive a product cycle, so the state space is finite without any
explicit cap.
"""

from dataclasses import dataclass

from .values import INF, InputError, InternalConsistencyError, value_to_json, \
    value_from_json
from .game import REACHABILITY, LassoPlay


def _skey(I):
    return tuple(sorted(I))


def reachable_strata(game):
    """Strata (survivor set, vertex) reachable from (Pi, v0), sorted."""
    root = (frozenset(game.players), game.initial)
    seen = {root}
    queue = [root]
    while queue:
        I, v = queue.pop(0)
        I2 = frozenset(i for i in I if v not in game.targets[i])
        for w in game.succ[v]:
            t = (I2, w)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return sorted(seen, key=lambda s: (_skey(s[0]), s[1]))


@dataclass(frozen=True)
class CostBoundTable:
    """Lambda-bar: (survivors, vertex, first edge, player) -> max cost.

    Values: -1 (player not surviving, or empty play set), a natural
    number, or +inf.
    """

    entries: dict
    iteration: int

    def aggregated(self, game, I, v, i):
        best = -1
        for v2 in game.succ[v]:
            val = self.entries[(I, v, v2, i)]
            if val == INF:
                return INF
            if val > best:
                best = val
        return best

    def same_entries(self, other):
        return self.entries == other.entries

    def to_json(self, game):
        rows = []
        for (I, v, v2, i), val in self.entries.items():
            rows.append({"survivors": list(_skey(I)), "from": v, "to": v2,
                         "player": i, "value": value_to_json(val)})
        rows.sort(key=lambda r: (r["survivors"], r["from"], r["to"],
                                 r["player"]))
        return {"iteration": self.iteration, "entries": rows}

    @staticmethod
    def from_json(obj):
        entries = {}
        for r in obj["entries"]:
            key = (frozenset(r["survivors"]), r["from"], r["to"], r["player"])
            entries[key] = value_from_json(r["value"])
        return CostBoundTable(entries=entries, iteration=obj["iteration"])


@dataclass
class FixpointReport:
    """Result of iterating the refinement to its fixpoint."""

    mode: str
    alpha_star: int
    final_table: object
    per_iteration: list
    nonempty: dict            # stratum key -> bool
    witnesses: dict           # (player, stratum key) -> LassoPlay
    witness_costs: dict       # (player, stratum key) -> value
    defaults: dict            # stratum key -> LassoPlay
    exists: bool = True


# -- deadline product -------------------------------------------------------


def _no_constraint(S, w, j):
    return None


def _table_constraint(game, table):
    cache = {}

    def agg(S, w, j):
        key = (S, w, j)
        if key not in cache:
            val = table.aggregated(game, S, w, j)
            cache[key] = None if (val == -1 or val == INF) else val
        return cache[key]

    return agg


class DeadlineProduct:
    """Valid-run automaton for one stratum against a previous table."""

    def __init__(self, game, agg, I, v, bounds=None):
        self.game = game
        self.agg = agg
        S0 = frozenset(i for i in I if v not in game.targets[i])
        D0 = {}
        if bounds:
            for i in S0:
                b = bounds.get(i, INF)
                if b != INF:
                    D0[i] = b
        if any(d < 1 for d in D0.values()):
            self.s0 = None
        else:
            self.s0 = (v, S0, tuple(sorted(D0.items())))
        self.adj = {}
        self.live = set()
        if self.s0 is not None:
            self._explore()

    def transition(self, state, w):
        """Successor state after edge (state vertex, w); None if invalid."""
        game = self.game
        u, S, D = state
        if not game.is_edge(u, w):
            return None
        D2 = {i: d - 1 for i, d in D}
        j = game.owner[u]
        if j in S:
            for alt in game.succ[u]:
                if alt == w:
                    continue
                a = self.agg(S, alt, j)
                if a is not None:
                    D2[j] = min(D2.get(j, a), a)
        S2 = frozenset(i for i in S if w not in game.targets[i])
        D2 = {i: d for i, d in D2.items() if i in S2}
        if any(d < 1 for d in D2.values()):
            return None
        return (w, S2, tuple(sorted(D2.items())))

    def _explore(self):
        game = self.game
        seen = {self.s0}
        queue = [self.s0]
        succs = {}
        while queue:
            s = queue.pop(0)
            outs = []
            for w in game.succ[s[0]]:
                t = self.transition(s, w)
                if t is not None:
                    outs.append((w, t))
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
            succs[s] = outs
        # prune to the live region: states with valid infinite continuations
        alive = set(seen)
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if not any(t in alive for (_w, t) in succs[s]):
                    alive.discard(s)
                    changed = True
        self.live = alive
        self.adj = {s: [(w, t) for (w, t) in succs[s] if t in alive]
                    for s in alive}

    def live_from(self, first=None):
        """Live initial state: s0 itself, or s0 forced through edge `first`.
        Returns (anchor state or None, discharged-at-v set)."""
        if self.s0 is None:
            return None
        if first is None:
            return self.s0 if self.s0 in self.live else None
        t = self.transition(self.s0, first)
        if t is None or t not in self.live:
            return None
        return t


def _state_key(s):
    return (s[0], tuple(sorted(s[1])), s[2])


def _sorted_adj(prod, s):
    return sorted(prod.adj[s], key=lambda wt: (wt[0], _state_key(wt[1])))


def _analysis(prod, i):
    """val[s] = max hit distance of player i from alive live state s
    (INF if an i-alive cycle is reachable through alive states)."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}
    val = {}

    def alive(s):
        return i in s[1]

    roots = sorted((s for s in prod.live if alive(s)), key=_state_key)
    for root in roots:
        if color.get(root, WHITE) != WHITE:
            continue
        stack = [(root, 0)]
        while stack:
            s, phase = stack.pop()
            if phase == 0:
                if color.get(s, WHITE) != WHITE:
                    continue
                color[s] = GRAY
                stack.append((s, 1))
                for (_w, t) in prod.adj[s]:
                    if alive(t):
                        c2 = color.get(t, WHITE)
                        if c2 == GRAY:
                            val[t] = INF
                        elif c2 == WHITE:
                            stack.append((t, 0))
            else:
                best = None
                for (_w, t) in prod.adj[s]:
                    if not alive(t):
                        cand = 1
                    elif val.get(t) == INF or color.get(t) == GRAY:
                        cand = INF
                    else:
                        cand = 1 + val[t]
                    if best is None or cand > best:
                        best = cand
                if val.get(s) == INF:
                    best = INF
                val[s] = best
                color[s] = BLACK
    return val


def _compute_table(game, agg, strata, iteration):
    entries = {}
    products = {}
    for (I, v) in strata:
        prod = DeadlineProduct(game, agg, I, v)
        products[(I, v)] = prod
        vals = {i: _analysis(prod, i) for i in I}
        for v2 in game.succ[v]:
            s1 = prod.live_from(v2) if prod.s0 is not None else None
            for i in game.players:
                if i not in I or s1 is None:
                    entry = -1
                elif v in game.targets[i]:
                    entry = 0
                elif i not in s1[1]:
                    entry = 1
                else:
                    d = vals[i][s1]
                    entry = INF if d == INF else 1 + d
                entries[(I, v, v2, i)] = entry
    return CostBoundTable(entries=entries, iteration=iteration), products


def initial_table(game):
    """Lambda-bar over all plays (no erase constraints yet)."""
    _require_reach(game)
    strata = reachable_strata(game)
    table, _products = _compute_table(game, _no_constraint, strata, 0)
    return table


def step(game, table):
    """One erase round: recompute every cell against the previous table."""
    _require_reach(game)
    strata = reachable_strata(game)
    agg = _table_constraint(game, table)
    new, _products = _compute_table(game, agg, strata, table.iteration + 1)
    return new


def _require_reach(game):
    if game.cost_kind != REACHABILITY:
        raise InputError("reachability fixpoint requires a reachability "
                         "game, got %r" % (game.cost_kind,))


def _walk_lasso(prod, start, pick):
    """Walk the live graph from `start`, choosing successors with `pick`
    (a function of the current state returning (w, t)); returns the vertex
    lasso once a product state repeats."""
    seen = {}
    seq = []
    s = start
    while s not in seen:
        seen[s] = len(seq)
        seq.append(s)
        _w, s = pick(s)
    k = seen[s]
    return LassoPlay.make([q[0] for q in seq[:k]], [q[0] for q in seq[k:]])


def _greedy_pick(prod):
    def pick(s):
        return _sorted_adj(prod, s)[0]
    return pick


def _extract_witness(game, prod, vals, i, aggregated_value):
    """Maximal-cost lasso for player i from the stratum's initial state."""
    s0 = prod.s0
    if aggregated_value == 0:
        return _walk_lasso(prod, s0, _greedy_pick(prod))
    val = vals[i]

    def alive(s):
        return i in s[1]

    if aggregated_value == INF:
        def pick(s):
            for (w, t) in _sorted_adj(prod, s):
                if alive(t) and val.get(t) == INF:
                    return (w, t)
            raise InternalConsistencyError(
                "no INF continuation for player %r" % (i,))
        return _walk_lasso(prod, s0, pick)

    remaining = [aggregated_value]

    def pick(s):
        if not alive(s) or remaining[0] <= 0:
            return _greedy_pick(prod)(s)
        d = remaining[0]
        for (w, t) in _sorted_adj(prod, s):
            if not alive(t):
                cand = 1
            elif val.get(t) == INF:
                continue
            else:
                cand = 1 + val[t]
            if cand == d:
                remaining[0] = d - 1
                return (w, t)
        raise InternalConsistencyError(
            "cannot realize max cost %r for player %r" % (d, i))
    return _walk_lasso(prod, s0, pick)


def run_fixpoint(game):
    """Iterate refinement steps to the fixpoint and extract certificates."""
    _require_reach(game)
    strata = reachable_strata(game)
    table, _p = _compute_table(game, _no_constraint, strata, 0)
    per_iteration = [table]
    for _round in range(100000):
        agg = _table_constraint(game, table)
        new, products = _compute_table(game, agg, strata, table.iteration + 1)
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
    for (I, v) in strata:
        prod = DeadlineProduct(game, agg, I, v)
        ok = prod.live_from() is not None
        nonempty[(I, v)] = ok
        if not ok:
            raise InternalConsistencyError(
                "empty fixpoint set at survivors %r, vertex %r (reachability "
                "sets must be nonempty)" % (sorted(I), v))
        defaults[(I, v)] = _walk_lasso(prod, prod.s0, _greedy_pick(prod))
        vals = {i: _analysis(prod, i) for i in I}
        for i in sorted(I):
            av = table.aggregated(game, I, v, i)
            lasso = _extract_witness(game, prod, vals, i, av)
            got = game.cost_of(lasso, i)
            if got != av:
                raise InternalConsistencyError(
                    "witness for player %r at (%r, %r) costs %r, "
                    "table says %r" % (i, sorted(I), v, got, av))
            witnesses[(i, I, v)] = lasso
            witness_costs[(i, I, v)] = av
    return FixpointReport(mode=REACHABILITY, alpha_star=alpha_star,
                          final_table=table, per_iteration=per_iteration,
                          nonempty=nonempty, witnesses=witnesses,
                          witness_costs=witness_costs, defaults=defaults,
                          exists=True)


def membership(game, table, I, lasso):
    """Does the lasso belong to the fixpoint-iteration set at
    (survivors I, its start vertex), judged against `table`?"""
    _require_reach(game)
    game.validate_lasso(lasso)
    agg = _table_constraint(game, table)
    v = lasso.start()
    prod = DeadlineProduct.__new__(DeadlineProduct)
    prod.game = game
    prod.agg = agg
    S0 = frozenset(i for i in I if v not in game.targets[i])
    state = (v, S0, ())
    pos = 0
    seen = set()
    stem_len = len(lasso.stem)
    clen = len(lasso.cycle)
    while True:
        if pos >= stem_len:
            key = ((pos - stem_len) % clen, state)
            if key in seen:
                return True
            seen.add(key)
        w = lasso.vertex_at(pos + 1)
        state = prod.transition(state, w)
        if state is None:
            return False
        pos += 1


def constrained_existence(game, report, bounds):
    """A lasso in the final fixpoint set from v0 with cost <= bounds
    componentwise, or None.  `bounds`: mapping player -> value or INF."""
    _require_reach(game)
    table = report.final_table if isinstance(report, FixpointReport) \
        else report
    agg = _table_constraint(game, table)
    I = frozenset(game.players)
    prod = DeadlineProduct(game, agg, I, game.initial, bounds=bounds)
    if prod.live_from() is None:
        return None
    lasso = _walk_lasso(prod, prod.s0, _greedy_pick(prod))
    cost = game.cost(lasso)
    for ix, i in enumerate(game.players):
        if cost[ix] > bounds.get(i, INF):
            raise InternalConsistencyError(
                "constrained witness violates bound for player %r" % (i,))
    return lasso


def report_to_json(game, report):
    wit = []
    for (i, I, v), lasso in sorted(report.witnesses.items(),
                                   key=lambda kv: (kv[0][0],
                                                   _skey(kv[0][1]),
                                                   kv[0][2])):
        wit.append({"player": i, "survivors": list(_skey(I)), "vertex": v,
                    "lasso": lasso.to_json(),
                    "cost": value_to_json(report.witness_costs[(i, I, v)])})
    return {
        "mode": report.mode,
        "alpha_star": report.alpha_star,
        "iterations": [t.to_json(game) for t in report.per_iteration],
        "nonempty": [{"survivors": list(_skey(I)), "vertex": v,
                      "value": bool(b)}
                     for (I, v), b in sorted(report.nonempty.items(),
                                             key=lambda kv: (_skey(kv[0][0]),
                                                             kv[0][1]))],
        "witnesses": wit,
        "exists": bool(report.exists),
    }
