import json

import pytest

from spe_lab.game import Game
from spe_lab.strategy import MooreStrategy, Profile

LIMSUP_EX_JSON = {
    "players": ["p1", "p2"],
    "vertices": [
        {"id": "v0", "owner": "p1"},
        {"id": "v1", "owner": "p1"},
        {"id": "v2", "owner": "p2"},
        {"id": "v3", "owner": "p1"},
        {"id": "v4", "owner": "p1"},
    ],
    "edges": [
        {"from": "v0", "to": "v1", "weights": [0, 0]},
        {"from": "v0", "to": "v2", "weights": [0, 0]},
        {"from": "v1", "to": "v1", "weights": [3, 3]},
        {"from": "v2", "to": "v3", "weights": [0, 0]},
        {"from": "v2", "to": "v4", "weights": [0, 0]},
        {"from": "v3", "to": "v3", "weights": [3, 4]},
        {"from": "v4", "to": "v4", "weights": [1, 3]},
    ],
    "cost": {"kind": "limsup"},
    "initial": "v0",
}

LIMINF_EX_JSON = {
    "players": ["p1", "p2"],
    "vertices": [
        {"id": "v0", "owner": "p1"},
        {"id": "v1", "owner": "p2"},
        {"id": "v2", "owner": "p1"},
        {"id": "v3", "owner": "p2"},
    ],
    "edges": [
        {"from": "v0", "to": "v1", "weights": [2, 0]},
        {"from": "v0", "to": "v2", "weights": [0, 0]},
        {"from": "v1", "to": "v0", "weights": [2, 0]},
        {"from": "v1", "to": "v3", "weights": [0, 0]},
        {"from": "v2", "to": "v2", "weights": [1, 2]},
        {"from": "v3", "to": "v3", "weights": [0, 1]},
    ],
    "cost": {"kind": "liminf"},
    "initial": "v0",
}

CHAIN_JSON = {
    "players": ["p1"],
    "vertices": [
        {"id": "a", "owner": "p1"},
        {"id": "b", "owner": "p1"},
        {"id": "c", "owner": "p1"},
    ],
    "edges": [
        {"from": "a", "to": "b"},
        {"from": "b", "to": "c"},
        {"from": "c", "to": "c"},
    ],
    "cost": {"kind": "reachability", "targets": {"p1": ["c"]}},
    "initial": "a",
}

DAWDLE_JSON = {
    "players": ["p1"],
    "vertices": [
        {"id": "a", "owner": "p1"},
        {"id": "t", "owner": "p1"},
    ],
    "edges": [
        {"from": "a", "to": "a"},
        {"from": "a", "to": "t"},
        {"from": "t", "to": "t"},
    ],
    "cost": {"kind": "reachability", "targets": {"p1": ["t"]}},
    "initial": "a",
}


@pytest.fixture
def limsup_ex():
    return Game.from_json(LIMSUP_EX_JSON)


@pytest.fixture
def liminf_ex():
    return Game.from_json(LIMINF_EX_JSON)


@pytest.fixture
def chain():
    return Game.from_json(CHAIN_JSON)


@pytest.fixture
def dawdle():
    return Game.from_json(DAWDLE_JSON)


def positional_profile(game, choices_per_player):
    per = {p: MooreStrategy.positional(game, p, choices)
           for p, choices in choices_per_player.items()}
    return Profile.make(game, per)


@pytest.fixture
def limsup_ex_profiles(limsup_ex):
    """The four profiles of the running limsup example: sigma1/sigma1' for
    player 1 (go to v1 / go to v2), sigma2/sigma2' for player 2 (v3 / v4)."""
    s1 = MooreStrategy.positional(
        limsup_ex, "p1", {"v0": "v1", "v1": "v1", "v3": "v3", "v4": "v4"})
    s1p = MooreStrategy.positional(
        limsup_ex, "p1", {"v0": "v2", "v1": "v1", "v3": "v3", "v4": "v4"})
    s2 = MooreStrategy.positional(limsup_ex, "p2", {"v2": "v3"})
    s2p = MooreStrategy.positional(limsup_ex, "p2", {"v2": "v4"})
    return {"s1": s1, "s1p": s1p, "s2": s2, "s2p": s2p}


@pytest.fixture
def liminf_ex_thick_profile(liminf_ex):
    """The profile drawn thick in the liminf example: outcome v0 v1 v3^w."""
    return positional_profile(liminf_ex, {
        "p1": {"v0": "v1", "v2": "v2"},
        "p2": {"v1": "v3", "v3": "v3"},
    })


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
