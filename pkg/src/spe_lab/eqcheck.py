"""Complete checkers for NE and (very) weak equilibrium notions.

Subgames are quantified over the finite product of the arena with all
memory machines (and, in reachability mode, the survivor set): two
histories landing in the same product state induce identical verdict
contributions, so enumerating reachable product states under arbitrary
edge choices is complete.
"""

from dataclasses import dataclass

from .values import INF
from .game import REACHABILITY, LIMINF, LassoPlay
from . import strategy as strat


@dataclass(frozen=True)
class ProductState:
    """Quotient of histories: vertex, memory vector, survivor set.

    ``survivors`` is None in prefix-independent mode (costs do not depend
    on the past, so the component is dropped).
    """

    vertex: str
    memories: tuple
    survivors: object

    def sort_key(self):
        return (self.vertex, str(self.memories),
                tuple(sorted(self.survivors)) if self.survivors is not None
                else ())


@dataclass(frozen=True)
class Verdict:
    kind: str
    holds: bool
    witness: dict = None


def initial_state(game, profile, start=None):
    if start is None:
        start = game.initial
    mems = profile.step_memories(profile.initial_memories(), start)
    if game.cost_kind == REACHABILITY:
        surv = frozenset(i for i in game.players
                         if start not in game.targets[i])
    else:
        surv = None
    return ProductState(start, mems, surv)


def step_state(game, profile, s, w):
    """Successor product state after taking edge (s.vertex, w)."""
    mems = profile.step_memories(s.memories, w)
    surv = s.survivors
    if surv is not None:
        surv = frozenset(i for i in surv if w not in game.targets[i])
    return ProductState(w, mems, surv)


def reachable_states(game, profile, start=None):
    """All product states reachable by ANY history from the start vertex,
    in deterministic BFS order."""
    root = initial_state(game, profile, start)
    seen = {root}
    order = [root]
    queue = [root]
    while queue:
        s = queue.pop(0)
        for w in game.succ[s.vertex]:
            t = step_state(game, profile, s, w)
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def continuation(game, profile, s, _cache=None):
    """The profile's outcome from a product state, as (stem, cycle) lists
    of product states.  The state itself is position 0."""
    if _cache is not None and s in _cache:
        return _cache[s]
    seen = {}
    order = []
    cur = s
    while True:
        if cur in seen:
            k = seen[cur]
            res = (order[:k], order[k:])
            break
        seen[cur] = len(order)
        order.append(cur)
        ix = game.players.index(game.owner[cur.vertex])
        w = profile.strategies[ix].choose(cur.memories[ix], cur.vertex)
        cur = step_state(game, profile, cur, w)
    if _cache is not None:
        _cache[s] = res
    return res


def _vertex_lasso(stem, cycle):
    return LassoPlay.make([q.vertex for q in stem], [q.vertex for q in cycle])


def suffix_cost(game, i, stem, cycle):
    """Cost of the suffix play given by a product-state lasso, counting the
    first state as position 0."""
    if game.cost_kind == REACHABILITY:
        t = game.targets[i]
        seq = stem + cycle
        return next((n for n, q in enumerate(seq) if q.vertex in t), INF)
    return game.cost_of(_vertex_lasso(stem, cycle), i)


def check_very_weak_spe(game, profile):
    """One-shot deviation check at every reachable subgame.

    By the one-shot deviation property this decides weak SPE, and for
    reachability costs it decides SPE.
    """
    cache = {}
    for s in reachable_states(game, profile):
        i = game.owner[s.vertex]
        if s.survivors is not None and i not in s.survivors:
            continue
        stem, cycle = continuation(game, profile, s, cache)
        c = suffix_cost(game, i, stem, cycle)
        prescribed = (stem + cycle)[1].vertex if len(stem) + len(cycle) > 1 \
            else cycle[0].vertex
        for w in game.succ[s.vertex]:
            if w == prescribed:
                continue
            t = step_state(game, profile, s, w)
            tstem, tcycle = continuation(game, profile, t, cache)
            if game.cost_kind == REACHABILITY:
                c2 = 1 + suffix_cost(game, i, tstem, tcycle)
            else:
                c2 = suffix_cost(game, i, tstem, tcycle)
            if c2 < c:
                return Verdict("very-weak-spe", False, witness={
                    "state": s.sort_key(),
                    "vertex": s.vertex,
                    "player": i,
                    "alternative": [s.vertex, w],
                    "costs": [c2, c],
                })
    return Verdict("very-weak-spe", True)


# -- Nash equilibrium ------------------------------------------------------

def _best_response_product(game, profile, i, start=None):
    """Product of the arena with the machines of players other than i:
    free moves at i's vertices, profile moves elsewhere.  Returns
    (states in BFS order, edges as (s, t, (u, w)) triples, root)."""
    if start is None:
        start = game.initial
    mems0 = profile.step_memories(profile.initial_memories(), start)
    root = (start, mems0)
    seen = {root}
    order = [root]
    queue = [root]
    edges = []
    while queue:
        s = queue.pop(0)
        v, mems = s
        if game.owner[v] == i:
            succs = game.succ[v]
        else:
            jx = game.players.index(game.owner[v])
            succs = (profile.strategies[jx].choose(mems[jx], v),)
        for w in succs:
            t = (w, profile.step_memories(mems, w))
            edges.append((s, t, (v, w)))
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order, edges, root


def _sccs(nodes, edges):
    """Tarjan's strongly connected components (iterative).

    ``edges``: mapping node -> list of successor nodes.  Returns a list of
    frozensets in deterministic order.
    """
    index = {}
    low = {}
    on = set()
    stack = []
    out = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    advanced = True
                    break
                if w in on:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return out


def _best_response_value(game, profile, i, start=None):
    """Optimal value player i can enforce against the others' machines."""
    order, edges, root = _best_response_product(game, profile, i, start)
    if game.cost_kind == REACHABILITY:
        t = game.targets[i]
        dist = {root: 0}
        if root[0] in t:
            return 0
        adj = {}
        for (a, b, _e) in edges:
            adj.setdefault(a, []).append(b)
        queue = [root]
        while queue:
            s = queue.pop(0)
            for b in adj.get(s, ()):
                if b not in dist:
                    dist[b] = dist[s] + 1
                    if b[0] in t:
                        return dist[b]
                    queue.append(b)
        return INF
    ix = game.players.index(i)
    adj = {}
    for (a, b, _e) in edges:
        adj.setdefault(a, []).append(b)
    if game.cost_kind == LIMINF:
        comps = _sccs(order, adj)
        comp_of = {}
        for c in comps:
            for n in c:
                comp_of[n] = c
        best = None
        for (a, b, (u, w)) in edges:
            if comp_of[a] is comp_of[b]:
                val = game.weight(u, w, i)
                if best is None or val < best:
                    best = val
        return best if best is not None else INF
    # limsup: smallest threshold c admitting a reachable cycle with all
    # of player i's weights <= c
    for c in game.value_range(i):
        sub = {}
        nodes = set()
        for (a, b, (u, w)) in edges:
            if game.weight(u, w, i) <= c:
                sub.setdefault(a, []).append(b)
                nodes.add(a)
                nodes.add(b)
        comps = _sccs(sorted(nodes, key=str), sub)
        comp_of = {}
        for comp in comps:
            for n in comp:
                comp_of[n] = comp
        for (a, b, _e) in edges:
            if game.weight(_e[0], _e[1], i) <= c and comp_of.get(a) is not None \
                    and comp_of[a] is comp_of.get(b):
                return c
    return INF


def check_ne(game, profile):
    """Nash equilibrium at the initial vertex, against arbitrary
    (not necessarily finite-memory) unilateral deviations."""
    play = strat.outcome(game, profile)
    costs = game.cost(play)
    for ix, i in enumerate(game.players):
        best = _best_response_value(game, profile, i)
        if best < costs[ix]:
            return Verdict("ne", False, witness={
                "player": i,
                "best_response_value": best,
                "outcome_cost": costs[ix],
                "outcome": play.to_json(),
            })
    return Verdict("ne", True)


# -- bounded deviation search ---------------------------------------------

def _deviation_search(game, profile, i, s0, budget, cache):
    """Least cost player i can reach from product state s0 using at most
    ``budget`` deviation steps placed anywhere on the evolving outcome
    (suffix costs, s0.vertex = position 0)."""
    ix = game.players.index(i)
    best = [None]

    def note(val):
        if best[0] is None or val < best[0]:
            best[0] = val

    def explore(s, offset, remaining):
        stem, cycle = continuation(game, profile, s, cache)
        seq = stem + cycle
        limit = len(stem) + 2 * len(cycle)
        hit_pos = None
        if game.cost_kind == REACHABILITY:
            t = game.targets[i]
            hit_pos = next((n for n, q in enumerate(seq)
                            if q.vertex in t), None)
            if hit_pos is not None:
                note(offset + hit_pos)
            else:
                note(INF)
        else:
            note(game.cost_of(_vertex_lasso(stem, cycle), i))
        if remaining <= 0:
            return
        for p in range(limit):
            if hit_pos is not None and p > hit_pos:
                break
            q = seq[p] if p < len(seq) else cycle[(p - len(stem))
                                                  % len(cycle)]
            if game.owner[q.vertex] != i:
                continue
            if q.survivors is not None and i not in q.survivors \
                    and game.cost_kind == REACHABILITY:
                continue
            nxt = seq[p + 1] if p + 1 < len(seq) \
                else cycle[(p + 1 - len(stem)) % len(cycle)]
            for w in game.succ[q.vertex]:
                if w == nxt.vertex:
                    continue
                t2 = step_state(game, profile, q, w)
                explore(t2, offset + p + 1, remaining - 1)

    explore(s0, 0, budget)
    return best[0]


def check_weak_ne_bounded(game, profile, k, start=None, state=None):
    """Refutation-complete search for profitable deviations with at most k
    deviation steps (anywhere on the evolving outcome).  ``state`` runs the
    check in the subgame rooted at that product state."""
    cache = {}
    s0 = state if state is not None else initial_state(game, profile, start)
    stem, cycle = continuation(game, profile, s0, cache)
    for i in game.players:
        if game.cost_kind == REACHABILITY and s0.survivors is not None \
                and i not in s0.survivors:
            continue
        c = suffix_cost(game, i, stem, cycle)
        best = _deviation_search(game, profile, i, s0, k, cache)
        if best is not None and best < c:
            return Verdict("weak-ne-bounded", False, witness={
                "player": i,
                "k": k,
                "improved_cost": best,
                "outcome_cost": c,
                "state": s0.sort_key(),
            })
    return Verdict("weak-ne-bounded", True)


def check_very_weak_ne(game, profile, start=None):
    """One-shot layer at the root only (deviation step exactly at the start
    vertex and nowhere else)."""
    if start is None:
        start = game.initial
    s0 = initial_state(game, profile, start)
    cache = {}
    stem, cycle = continuation(game, profile, s0, cache)
    i = game.owner[start]
    if s0.survivors is not None and i not in s0.survivors:
        return Verdict("very-weak-ne", True)
    c = suffix_cost(game, i, stem, cycle)
    prescribed = (stem + cycle)[1].vertex if len(stem) + len(cycle) > 1 \
        else cycle[0].vertex
    for w in game.succ[start]:
        if w == prescribed:
            continue
        t = step_state(game, profile, s0, w)
        tstem, tcycle = continuation(game, profile, t, cache)
        if game.cost_kind == REACHABILITY:
            c2 = 1 + suffix_cost(game, i, tstem, tcycle)
        else:
            c2 = suffix_cost(game, i, tstem, tcycle)
        if c2 < c:
            return Verdict("very-weak-ne", False, witness={
                "player": i,
                "alternative": [start, w],
                "costs": [c2, c],
            })
    return Verdict("very-weak-ne", True)
