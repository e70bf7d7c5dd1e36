"""Seeded random games and profiles for the test corpus.

Generated games are kept sparse (|E| close to |V|) so that brute-force
lasso universes stay small enough for exact oracle comparison.
"""

import random

from .game import Game, REACHABILITY
from .strategy import MooreStrategy, Profile


_UNIVERSE_CAP = 12000


def _universe_size(vertices, succ, bound=8):
    """Number of (stem walk, cycle walk) pairs a depth-`bound` lasso
    enumeration would visit, computed by dynamic programming."""
    walks = {v: 1 for v in vertices}          # walks with k vertices from v
    total_walks = dict(walks)                 # 1..k vertices
    for _k in range(bound - 1):
        walks = {v: sum(walks[w] for w in succ[v]) for v in vertices}
        for v in vertices:
            total_walks[v] += walks[v]
    anchored = {v: sum(total_walks[w] for w in succ[v]) for v in vertices}
    total = 0
    for v in vertices:
        total += total_walks[v]               # empty stem, cycles from v
        ends = {v: 1}                         # stem walks from v by endpoint
        for _k in range(bound):
            total += sum(c * anchored[u] for u, c in ends.items())
            nxt = {}
            for u, c in ends.items():
                for w in succ[u]:
                    nxt[w] = nxt.get(w, 0) + c
            ends = nxt
    return total


def gen_game(seed, mode, max_vertices=5, max_players=3):
    """A random valid game, reproducible from the seed.  Graphs whose
    depth-8 lasso universe would be too large for exact oracle comparison
    are rejected and redrawn (deterministically, from a derived seed)."""
    for attempt in range(1000):
        rng = random.Random("game:%d:%d" % (seed, attempt))
        n = rng.randint(3, max_vertices)
        k = rng.randint(2, max_players) if max_players >= 2 else 1
        players = ["p%d" % (j + 1) for j in range(k)]
        vertices = ["v%d" % j for j in range(n)]
        owner = {v: rng.choice(players) for v in vertices}
        succ = {v: {rng.choice(vertices)} for v in vertices}
        for _extra in range(rng.randint(1, 3)):
            v = rng.choice(vertices)
            succ[v].add(rng.choice(vertices))
        if _universe_size(vertices, succ) <= _UNIVERSE_CAP:
            break
    edges = []
    for v in vertices:
        for w in sorted(succ[v]):
            e = {"from": v, "to": w}
            if mode != REACHABILITY:
                e["weights"] = [rng.randint(0, 2) for _j in range(k)]
            edges.append(e)
    cost = {"kind": mode}
    if mode == REACHABILITY:
        cost["targets"] = {
            i: sorted(v for v in vertices if rng.random() < 0.35)
            for i in players}
    return Game.from_json({
        "players": players,
        "vertices": [{"id": v, "owner": owner[v]} for v in vertices],
        "edges": edges,
        "cost": cost,
        "initial": "v0",
    })


def gen_profile(game, seed):
    """A random valid profile: positional, or with a two-state memory."""
    rng = random.Random("profile:%d" % (seed,))
    per = {}
    for p in game.players:
        if rng.random() < 0.7:
            choices = {v: rng.choice(game.succ[v]) for v in game.vertices
                       if game.owner[v] == p}
            per[p] = MooreStrategy.positional(game, p, choices)
        else:
            states = ("A", "B")
            update = {(m, v): rng.choice(states)
                      for m in states for v in game.vertices}
            output = {(m, v): rng.choice(game.succ[v])
                      for m in states for v in game.vertices
                      if game.owner[v] == p}
            per[p] = MooreStrategy(player=p, states=states, initial="A",
                                   update=update, output=output)
    return Profile.make(game, per)
