"""Arena representation, lasso plays, and cost evaluation.

A game is an n-player turn-based arena: a finite directed graph whose
vertices are partitioned among the players, plus a cost specification.
Two cost classes are supported:

* ``reachability`` -- per-player target sets; the cost of a play is the
  number of edges before the first visit to the player's target set
  (+inf if never).
* ``liminf`` / ``limsup`` -- per-player rational edge weights; the cost of
  a play is the liminf (resp. limsup) of the weight sequence.  For a lasso
  play this is the min (resp. max) weight on the cycle edges.

Plays are represented exclusively as lasso plays (stem + cycle); every
certificate the algorithms produce is a lasso.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json

from .values import INF, InputError, parse_rational, rational_to_json

REACHABILITY = "reachability"
LIMINF = "liminf"
LIMSUP = "limsup"


def _primitive(cycle):
    """Shortest period of a vertex cycle."""
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p == 0 and cycle == cycle[:p] * (n // p):
            return cycle[:p]
    return cycle


@dataclass(frozen=True)
class LassoPlay:
    """An ultimately periodic play stem . cycle^omega, in canonical form.

    Canonical form: the cycle is primitive and rotated to its
    lexicographically minimal rotation, and the stem is the shortest one
    presenting the word with that rotation.  Rotating the cycle alone would
    change the word, so the rotated-out prefix is kept on the stem.  Two
    lassos denote the same omega-word iff their canonical forms are equal.
    """

    stem: tuple
    cycle: tuple

    @staticmethod
    def make(stem, cycle):
        if not cycle:
            raise InputError("lasso cycle must be nonempty")
        stem = list(stem)
        cycle = list(_primitive(tuple(cycle)))
        # shortest stem over all rotations
        while stem and stem[-1] == cycle[-1]:
            stem.pop()
            cycle = [cycle[-1]] + cycle[:-1]
        # fix the rotation to the lexicographically minimal one; the stem
        # absorbs the rotated-out prefix so the omega-word is unchanged
        d = min(range(len(cycle)), key=lambda r: cycle[r:] + cycle[:r])
        stem = stem + cycle[:d]
        cycle = cycle[d:] + cycle[:d]
        return LassoPlay(tuple(stem), tuple(cycle))

    def vertex_at(self, n):
        """Vertex at position n (positions count vertices, stem[0] is 0)."""
        if n < len(self.stem):
            return self.stem[n]
        return self.cycle[(n - len(self.stem)) % len(self.cycle)]

    def unroll(self, n):
        """The first n vertices of the play."""
        return [self.vertex_at(k) for k in range(n)]

    def start(self):
        return self.stem[0] if self.stem else self.cycle[0]

    def steps(self):
        """All edges of stem + one cycle unrolling (including the wrap)."""
        seq = list(self.stem) + list(self.cycle)
        out = list(zip(seq, seq[1:]))
        out.append((self.cycle[-1], self.cycle[0]))
        return out

    def cycle_edges(self):
        c = list(self.cycle)
        return list(zip(c, c[1:])) + [(c[-1], c[0])]

    def to_json(self):
        return {"stem": list(self.stem), "cycle": list(self.cycle)}

    @staticmethod
    def from_json(obj):
        if not isinstance(obj, dict) or "cycle" not in obj:
            raise InputError("lasso must be {stem: [...], cycle: [...]}")
        return LassoPlay.make(obj.get("stem", []), obj["cycle"])

    @staticmethod
    def parse(text):
        """Parse the CLI shorthand "v0,v1|v3" (stem | cycle)."""
        if "|" not in text:
            raise InputError("lasso string must contain '|': %r" % text)
        stem_s, cycle_s = text.split("|", 1)
        stem = [v for v in stem_s.split(",") if v]
        cycle = [v for v in cycle_s.split(",") if v]
        return LassoPlay.make(stem, cycle)

    def __str__(self):
        return ",".join(self.stem) + "|" + ",".join(self.cycle)


@dataclass(frozen=True)
class Game:
    """A turn-based quantitative game on a finite graph."""

    players: tuple
    vertices: tuple
    owner: dict
    succ: dict              # vertex -> sorted tuple of successors
    cost_kind: str          # REACHABILITY | LIMINF | LIMSUP
    targets: dict = field(default_factory=dict)   # player -> frozenset
    weights: dict = field(default_factory=dict)   # (u,v) -> tuple per player
    initial: str = ""

    def __post_init__(self):
        if len(set(self.players)) != len(self.players) or not self.players:
            raise InputError("players must be a nonempty set of names")
        if len(set(self.vertices)) != len(self.vertices) or not self.vertices:
            raise InputError("vertices must be a nonempty set of ids")
        vs = set(self.vertices)
        for v in self.vertices:
            if v not in self.owner:
                raise InputError("vertex %r has no owner" % (v,))
            if self.owner[v] not in self.players:
                raise InputError("vertex %r owned by unknown player %r"
                                 % (v, self.owner[v]))
            if not self.succ.get(v):
                raise InputError("dead-end vertex %r (no outgoing edge)" % (v,))
            for w in self.succ[v]:
                if w not in vs:
                    raise InputError("edge (%r, %r) leaves the vertex set"
                                     % (v, w))
        if self.initial not in vs:
            raise InputError("initial vertex %r is not a vertex"
                             % (self.initial,))
        if self.cost_kind == REACHABILITY:
            for i in self.players:
                if i not in self.targets:
                    raise InputError("player %r has no target set" % (i,))
                for v in self.targets[i]:
                    if v not in vs:
                        raise InputError("target %r of player %r is not a "
                                         "vertex" % (v, i))
        elif self.cost_kind in (LIMINF, LIMSUP):
            for v in self.vertices:
                for w in self.succ[v]:
                    ws = self.weights.get((v, w))
                    if ws is None or len(ws) != len(self.players):
                        raise InputError(
                            "edge (%r, %r) must carry exactly %d weights"
                            % (v, w, len(self.players)))
        else:
            raise InputError("unsupported cost kind %r (supported: "
                             "reachability, liminf, limsup)"
                             % (self.cost_kind,))

    # -- helpers ----------------------------------------------------------

    def player_index(self, i):
        return self.players.index(i)

    def is_edge(self, u, v):
        return v in self.succ.get(u, ())

    def hits(self, v):
        """Players whose target contains v (reachability mode)."""
        return frozenset(i for i in self.players if v in self.targets[i])

    def weight(self, u, v, i):
        return self.weights[(u, v)][self.player_index(i)]

    def value_range(self, i):
        """C_i: the finite, sorted set of player i's weights in the graph."""
        ix = self.player_index(i)
        return sorted({w[ix] for w in self.weights.values()})

    def validate_lasso(self, play):
        for (u, v) in play.steps():
            if not self.is_edge(u, v):
                raise InputError("lasso step (%r, %r) is not an edge" % (u, v))

    # -- costs ------------------------------------------------------------

    def cost(self, play):
        """Cost vector of a lasso play, one extended value per player."""
        self.validate_lasso(play)
        if self.cost_kind == REACHABILITY:
            seq = list(play.stem) + list(play.cycle)
            out = []
            for i in self.players:
                t = self.targets[i]
                hit = next((n for n, v in enumerate(seq) if v in t), INF)
                out.append(hit)
            return tuple(out)
        edges = play.cycle_edges()
        agg = min if self.cost_kind == LIMINF else max
        return tuple(agg(self.weights[e][ix] for e in edges)
                     for ix in range(len(self.players)))

    def cost_of(self, play, i):
        return self.cost(play)[self.player_index(i)]

    def survivor_set(self, history):
        """Players whose target is disjoint from the history's vertices."""
        seen = set(history)
        return frozenset(i for i in self.players
                         if not (self.targets[i] & seen))

    def shift_cost_identity_check(self, history, play):
        """Cost-shift identity (test oracle).  Reachability: prefixing a
        history h shifts every surviving player's cost by |h| edges plus the
        junction edge.  Prefix-independent: prefixing changes no cost.
        """
        if history and not self.is_edge(history[-1], play.start()):
            raise InputError("history does not compose with the play")
        shifted = LassoPlay.make(tuple(history) + tuple(play.stem),
                                 play.cycle)
        base = self.cost(play)
        full = self.cost(shifted)
        if self.cost_kind != REACHABILITY:
            return full == base
        shift = len(history)  # |h| edges = len(history)-1, junction adds 1
        for ix, i in enumerate(self.players):
            if i not in self.survivor_set(history):
                continue
            if full[ix] != base[ix] + shift:
                return False
        return True

    # -- interchange format -------------------------------------------------

    def to_json(self):
        edges = []
        for v in self.vertices:
            for w in self.succ[v]:
                e = {"from": v, "to": w}
                if self.cost_kind != REACHABILITY:
                    e["weights"] = [rational_to_json(q)
                                    for q in self.weights[(v, w)]]
                edges.append(e)
        cost = {"kind": self.cost_kind}
        if self.cost_kind == REACHABILITY:
            cost["targets"] = {i: sorted(self.targets[i])
                               for i in self.players}
        return {
            "players": list(self.players),
            "vertices": [{"id": v, "owner": self.owner[v]}
                         for v in self.vertices],
            "edges": edges,
            "cost": cost,
            "initial": self.initial,
        }

    @staticmethod
    def from_json(obj):
        try:
            players = tuple(obj["players"])
            vdecls = obj["vertices"]
            edecls = obj["edges"]
            cost = obj["cost"]
            initial = obj["initial"]
        except (KeyError, TypeError) as exc:
            raise InputError("game is missing field: %s" % (exc,))
        vertices = tuple(d["id"] for d in vdecls)
        owner = {d["id"]: d["owner"] for d in vdecls}
        kind = cost.get("kind")
        succ = {v: [] for v in vertices}
        weights = {}
        for d in edecls:
            u, w = d.get("from"), d.get("to")
            if u not in succ:
                raise InputError("edge from unknown vertex %r" % (u,))
            succ[u].append(w)
            if kind in (LIMINF, LIMSUP):
                raw = d.get("weights")
                if raw is None:
                    raise InputError("edge (%r, %r) lacks weights" % (u, w))
                weights[(u, w)] = tuple(parse_rational(x) for x in raw)
        succ = {v: tuple(sorted(set(s))) for v, s in succ.items()}
        targets = {}
        if kind == REACHABILITY:
            tmap = cost.get("targets", {})
            targets = {i: frozenset(tmap.get(i, [])) for i in players}
        return Game(players=players, vertices=vertices, owner=owner,
                    succ=succ, cost_kind=kind, targets=targets,
                    weights=weights, initial=initial)

    @staticmethod
    def from_string(text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("invalid JSON: %s" % (exc,))
        return Game.from_json(obj)

    def to_string(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)
