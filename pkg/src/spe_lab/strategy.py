"""Finite-memory (Moore machine) strategies, profiles, and outcomes.

Memory convention: the update function is applied on every visited vertex,
including the current one, before the output is read.  At vertex ``v`` with
memory ``m`` the chosen successor is ``output(update(m, v), v)``, and the
memory carried to the successor is ``update(m, v)``.
"""

from dataclasses import dataclass

from .values import InputError
from .game import LassoPlay


@dataclass(frozen=True)
class MooreStrategy:
    """One player's strategy as a Moore machine.

    ``update`` must be total over memory x V; ``output`` must map every
    (memory, owned vertex) pair to an edge-successor of the vertex.
    """

    player: str
    states: tuple
    initial: object
    update: dict     # (state, vertex) -> state
    output: dict     # (state, vertex) -> successor

    def validate(self, game):
        if self.player not in game.players:
            raise InputError("strategy for unknown player %r" % (self.player,))
        if self.initial not in self.states:
            raise InputError("initial memory state %r is not a state"
                             % (self.initial,))
        for m in self.states:
            for v in game.vertices:
                if (m, v) not in self.update:
                    raise InputError(
                        "update of player %r is not total: missing (%r, %r)"
                        % (self.player, m, v))
                if self.update[(m, v)] not in self.states:
                    raise InputError("update of player %r leaves the state "
                                     "set at (%r, %r)" % (self.player, m, v))
                if game.owner[v] == self.player:
                    w = self.output.get((m, v))
                    if w is None:
                        raise InputError(
                            "output of player %r undefined at (%r, %r)"
                            % (self.player, m, v))
                    if not game.is_edge(v, w):
                        raise InputError(
                            "output of player %r at (%r, %r) is %r, not an "
                            "edge-successor" % (self.player, m, v, w))

    @staticmethod
    def positional(game, player, choices):
        """Single-state strategy from a vertex -> successor mapping."""
        m = "*"
        update = {(m, v): m for v in game.vertices}
        output = {}
        for v in game.vertices:
            if game.owner[v] == player:
                w = choices.get(v)
                if w is None:
                    raise InputError("positional strategy of %r misses "
                                     "vertex %r" % (player, v))
                output[(m, v)] = w
        return MooreStrategy(player=player, states=(m,), initial=m,
                             update=update, output=output)

    def step(self, m, v):
        return self.update[(m, v)]

    def choose(self, m, v):
        return self.output[(m, v)]

    def to_json(self):
        names = {m: "m%d" % k for k, m in enumerate(self.states)}
        return {
            "memory_states": [names[m] for m in self.states],
            "initial": names[self.initial],
            "update": sorted([names[m], v, names[m2]]
                             for (m, v), m2 in self.update.items()),
            "output": sorted([names[m], v, w]
                             for (m, v), w in self.output.items()),
        }

    @staticmethod
    def from_json(game, player, obj):
        if "positional" in obj:
            return MooreStrategy.positional(game, player, obj["positional"])
        try:
            states = tuple(obj["memory_states"])
            initial = obj["initial"]
            update = {(m, v): m2 for m, v, m2 in obj["update"]}
            output = {(m, v): w for m, v, w in obj["output"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("malformed strategy for player %r: %s"
                             % (player, exc))
        s = MooreStrategy(player=player, states=states, initial=initial,
                          update=update, output=output)
        s.validate(game)
        return s


@dataclass(frozen=True)
class Profile:
    """One MooreStrategy per player."""

    strategies: tuple   # aligned with game.players

    def __getitem__(self, player):
        for s in self.strategies:
            if s.player == player:
                return s
        raise KeyError(player)

    @staticmethod
    def make(game, per_player):
        strategies = []
        for i in game.players:
            if i not in per_player:
                raise InputError("profile misses player %r" % (i,))
            strategies.append(per_player[i])
        return Profile(tuple(strategies))

    def initial_memories(self):
        return tuple(s.initial for s in self.strategies)

    def step_memories(self, mems, v):
        return tuple(s.step(m, v) for s, m in zip(self.strategies, mems))

    def to_json(self):
        return {s.player: s.to_json() for s in self.strategies}

    @staticmethod
    def from_json(game, obj):
        per = {}
        for i in game.players:
            if i not in obj:
                raise InputError("profile misses player %r" % (i,))
            per[i] = MooreStrategy.from_json(game, i, obj[i])
        return Profile.make(game, per)


@dataclass(frozen=True)
class DeviationStep:
    """A position where the deviant's choice differs from the profile's."""

    history: tuple       # prefix of the outcome, ending at the step's vertex
    prescribed: str
    taken: str


@dataclass(frozen=True)
class DeviationReport:
    steps: tuple
    classification: str  # none | one-shot | finitely-deviating |
                         # infinitely-deviating | undetermined


def _simulate(game, choosers, memory_steppers, start, prior=None):
    """Run the product of the arena and the given machines to a lasso.

    ``choosers(mems, v)`` picks the successor, ``memory_steppers(mems, v)``
    advances all memories.  Returns (vertex lasso as lists, product keys).
    """
    mems = memory_steppers(None, None, init=True)
    if prior:
        if prior[-1] != start:
            raise InputError("prior history must end at the start vertex")
        for u in prior[:-1]:
            mems = memory_steppers(mems, u)
    seen = {}
    order = []
    v = start
    while True:
        mems = memory_steppers(mems, v)
        key = (v, mems)
        if key in seen:
            k = seen[key]
            return [q[0] for q in order[:k]], [q[0] for q in order[k:]], order
        seen[key] = len(order)
        order.append((v, mems))
        v = choosers(mems, v)


def outcome(game, profile, start=None, prior=None):
    """The unique play of the profile from ``start``, as a canonical lasso.

    ``prior`` (a history ending at ``start``) pre-loads the memories, which
    realizes the subgame restriction of the profile after that history.
    """
    if start is None:
        start = game.initial

    def stepper(mems, u, init=False):
        if init:
            return profile.initial_memories()
        return profile.step_memories(mems, u)

    def chooser(mems, v):
        s = profile[game.owner[v]]
        ix = game.players.index(game.owner[v])
        return s.choose(mems[ix], v)

    stem, cycle, _ = _simulate(game, chooser, stepper, start, prior)
    return LassoPlay.make(stem, cycle)


def deviation_steps(game, profile, deviant, start=None, horizon=None,
                    prior=None):
    """Deviation steps of ``deviant`` (vs the profile) along the outcome of
    (deviant, profile_{-i}) within the first ``horizon`` positions."""
    if start is None:
        start = game.initial
    i = deviant.player
    ix = game.players.index(i)
    if horizon is None:
        horizon = 2 * (len(game.vertices)
                       * max(1, len(deviant.states))
                       * max(1, len(profile[i].states)) + 1)

    mems = profile.initial_memories()
    dmem = deviant.initial
    if prior:
        if prior[-1] != start:
            raise InputError("prior history must end at the start vertex")
        for u in prior[:-1]:
            mems = profile.step_memories(mems, u)
            dmem = deviant.step(dmem, u)

    steps = []
    history = []
    seen = {}
    cycle_start = None
    v = start
    pos = 0
    while pos < horizon:
        mems = profile.step_memories(mems, v)
        dmem = deviant.step(dmem, v)
        history.append(v)
        key = (v, mems, dmem)
        if key in seen and cycle_start is None:
            cycle_start = seen[key]
            break
        seen[key] = pos
        if game.owner[v] == i:
            prescribed = profile[i].choose(mems[ix], v)
            taken = deviant.choose(dmem, v)
            if prescribed != taken:
                steps.append(DeviationStep(tuple(history), prescribed, taken))
            v = taken
        else:
            s = profile[game.owner[v]]
            jx = game.players.index(game.owner[v])
            v = s.choose(mems[jx], v)
        pos += 1

    if cycle_start is None:
        cls = "undetermined" if steps else "none"
        if not steps:
            cls = "none"
        return DeviationReport(tuple(steps), cls)
    if not steps:
        return DeviationReport((), "none")
    positions = [len(st.history) - 1 for st in steps]
    if any(p >= cycle_start for p in positions):
        return DeviationReport(tuple(steps), "infinitely-deviating")
    if positions == [0]:
        return DeviationReport(tuple(steps), "one-shot")
    return DeviationReport(tuple(steps), "finitely-deviating")


def one_shot_variant(game, profile, player, at_vertex, alternative):
    """The strategy that deviates to ``alternative`` the first time
    ``at_vertex`` is the current vertex, and copies the profile otherwise.

    Memory is (visits of ``at_vertex`` so far including the current one,
    saturated at 2, base memory): the counter is 1 exactly while standing
    on the first visit, which is where the single deviation step happens.
    """
    if not game.is_edge(at_vertex, alternative):
        raise InputError("alternative %r is not a successor of %r"
                         % (alternative, at_vertex))
    if game.owner[at_vertex] != player:
        raise InputError("vertex %r is not owned by player %r"
                         % (at_vertex, player))
    base = profile[player]
    states = tuple((k, m) for k in (0, 1, 2) for m in base.states)
    update = {}
    output = {}
    for (k, m) in states:
        for v in game.vertices:
            k2 = min(2, k + (1 if v == at_vertex else 0))
            update[((k, m), v)] = (k2, base.update[(m, v)])
            if game.owner[v] == player:
                w = base.output[(m, v)]
                if k == 1 and v == at_vertex:
                    w = alternative
                output[((k, m), v)] = w
    return MooreStrategy(player=player, states=states,
                         initial=(0, base.initial),
                         update=update, output=output)
