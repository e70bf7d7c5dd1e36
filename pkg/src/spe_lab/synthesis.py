"""Construct explicit finite-memory weak-SPE profiles from fixpoint reports.

The shared memory is a progressive labeling of histories: a label is a
maximal-cost witness lasso from the fixpoint report plus a position in it
(and, in reachability mode, the running survivor set).  On-path, everyone
follows the current label's lasso; when the prescribed successor is not
taken, the label switches to the punishing witness of the deviating player
at the vertex actually reached.  Witness maximality makes every such
punishment strong enough, which the audit re-verifies end to end.
"""

from .values import InputError, InternalConsistencyError
from .game import REACHABILITY
from .strategy import MooreStrategy, Profile, outcome
from . import reach as reach_mod
from . import prefixind as pfx_mod
from . import eqcheck

START = ("start",)


def _total(lasso):
    return len(lasso.stem) + len(lasso.cycle)


def _next_pos(lasso, pos):
    pos += 1
    if pos >= _total(lasso):
        return len(lasso.stem)
    return pos


def _switch_label(game, report, reach_mode, current_owner, survivors, v2):
    """Witness lasso to follow after `current_owner` deviated to v2."""
    if reach_mode:
        key = (current_owner, survivors, v2)
        if current_owner in survivors:
            lasso = report.witnesses.get(key)
        else:
            lasso = report.defaults.get((survivors, v2))
        if lasso is None:
            raise InternalConsistencyError(
                "no witness for stratum (%r, %r)" % (sorted(survivors), v2))
        return lasso
    lasso = report.witnesses.get((current_owner, v2))
    if lasso is None:
        raise InternalConsistencyError("no witness at vertex %r" % (v2,))
    return lasso


def synthesize(game, report, target_outcome=None):
    """A Moore profile that is a weak SPE (an SPE, for reachability) with
    outcome `target_outcome` (default: the stored root witness)."""
    reach_mode = game.cost_kind == REACHABILITY
    if not report.exists:
        raise InputError("no weak SPE exists: some reachable vertex has an "
                         "empty fixpoint set")
    full = frozenset(game.players)
    if reach_mode:
        root_default = report.witnesses[(game.players[0], full, game.initial)]
    else:
        root_default = report.witnesses[(game.players[0], game.initial)]
    if target_outcome is not None:
        if target_outcome.start() != game.initial:
            raise InputError("target outcome must start at the initial "
                             "vertex %r" % (game.initial,))
        if reach_mode:
            ok = reach_mod.membership(game, report.final_table, full,
                                      target_outcome)
        else:
            ok = pfx_mod.membership(game, report.final_table, target_outcome)
        if not ok:
            raise InputError(
                "target outcome %s is not in the fixpoint set at the "
                "initial vertex (membership probe failed)"
                % (target_outcome,))
        root = target_outcome
    else:
        root = root_default

    def start_update(u):
        if u == root.start():
            if reach_mode:
                return (root, 0, frozenset(i for i in full
                                           if u not in game.targets[i]))
            return (root, 0)
        return START

    def state_update(m, u2):
        if reach_mode:
            lasso, pos, J = m
        else:
            lasso, pos = m
            J = None
        u = lasso.vertex_at(pos)
        if not game.is_edge(u, u2):
            return m
        J2 = frozenset(i for i in J if u2 not in game.targets[i]) \
            if reach_mode else None
        np = _next_pos(lasso, pos)
        if u2 == lasso.vertex_at(np):
            return (lasso, np, J2) if reach_mode else (lasso, np)
        new = _switch_label(game, report, reach_mode, game.owner[u], J, u2)
        return (new, 0, J2) if reach_mode else (new, 0)

    # materialize the memory machine (shared by all players)
    update = {}
    states = [START]
    seen = {START}
    queue = [START]
    while queue:
        m = queue.pop(0)
        for u in game.vertices:
            m2 = start_update(u) if m == START else state_update(m, u)
            update[(m, u)] = m2
            if m2 not in seen:
                seen.add(m2)
                states.append(m2)
                queue.append(m2)

    strategies = {}
    for p in game.players:
        output = {}
        for m in states:
            for v in game.vertices:
                if game.owner[v] != p:
                    continue
                choice = game.succ[v][0]
                if m != START:
                    lasso, pos = m[0], m[1]
                    if lasso.vertex_at(pos) == v:
                        choice = lasso.vertex_at(_next_pos(lasso, pos))
                output[(m, v)] = choice
        strategies[p] = MooreStrategy(player=p, states=tuple(states),
                                      initial=START, update=update,
                                      output=output)
    return Profile.make(game, strategies)


def audit(game, profile, report, target_outcome=None):
    """True iff the profile passes the one-shot subgame check and its
    outcome costs exactly what the chosen root witness costs."""
    verdict = eqcheck.check_very_weak_spe(game, profile)
    if not verdict.holds:
        return False
    if target_outcome is not None:
        root = target_outcome
    else:
        full = frozenset(game.players)
        if game.cost_kind == REACHABILITY:
            root = report.witnesses[(game.players[0], full, game.initial)]
        else:
            root = report.witnesses[(game.players[0], game.initial)]
    return game.cost(outcome(game, profile)) == game.cost(root)
