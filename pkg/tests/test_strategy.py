import pytest
from hypothesis import given, strategies as st

from spe_lab.game import LassoPlay
from spe_lab.strategy import MooreStrategy, Profile, outcome, \
    deviation_steps, one_shot_variant
from spe_lab.values import InputError
from spe_lab import gen
from tests.conftest import positional_profile


def test_positional_strategy_and_validate(liminf_ex):
    s = MooreStrategy.positional(liminf_ex, "p1", {"v0": "v1", "v2": "v2"})
    s.validate(liminf_ex)
    assert s.choose(s.initial, "v0") == "v1"
    with pytest.raises(InputError, match="misses vertex"):
        MooreStrategy.positional(liminf_ex, "p1", {"v0": "v1"})


def test_validate_rejects_non_edge_output(liminf_ex):
    s = MooreStrategy.positional(liminf_ex, "p1", {"v0": "v3", "v2": "v2"})
    with pytest.raises(InputError, match="not an edge-successor"):
        s.validate(liminf_ex)


def test_validate_rejects_partial_update(liminf_ex):
    s = MooreStrategy(player="p1", states=("m",), initial="m",
                      update={}, output={})
    with pytest.raises(InputError, match="not total"):
        s.validate(liminf_ex)


def test_outcome_positional(liminf_ex, liminf_ex_thick_profile):
    assert outcome(liminf_ex, liminf_ex_thick_profile) == LassoPlay.parse("v0,v1|v3")
    assert outcome(liminf_ex, liminf_ex_thick_profile, start="v2") == \
        LassoPlay.parse("|v2")


def _dawdle_once_strategy():
    """Memory counts visits of `a` (update runs before output is read):
    output `a` on the first visit, `t` afterwards."""
    states = ("s0", "s1", "s2")
    update = {}
    output = {}
    for m, nxt in (("s0", "s1"), ("s1", "s2"), ("s2", "s2")):
        update[(m, "a")] = nxt
        update[(m, "t")] = m
        output[(m, "a")] = "a" if m == "s1" else "t"
        output[(m, "t")] = "t"
    return MooreStrategy(player="p1", states=states, initial="s0",
                         update=update, output=output)


def test_outcome_uses_memory(dawdle):
    s = _dawdle_once_strategy()
    s.validate(dawdle)
    prof = Profile.make(dawdle, {"p1": s})
    assert outcome(dawdle, prof) == LassoPlay.parse("a,a|t")


def test_outcome_with_prior_realizes_subgame(dawdle):
    prof = Profile.make(dawdle, {"p1": _dawdle_once_strategy()})
    assert outcome(dawdle, prof, start="a", prior=["a", "a"]) == \
        LassoPlay.parse("a|t")


def test_deviation_classification(limsup_ex, limsup_ex_profiles):
    prof = positional_profile(limsup_ex, {
        "p1": {"v0": "v1", "v1": "v1", "v3": "v3", "v4": "v4"},
        "p2": {"v2": "v3"}})
    # deviating strategy of player 1: go to v2 instead of v1 at v0
    rep = deviation_steps(limsup_ex, prof, limsup_ex_profiles["s1p"])
    assert rep.classification == "one-shot"
    assert rep.steps[0].history == ("v0",)
    assert rep.steps[0].prescribed == "v1" and rep.steps[0].taken == "v2"
    # identical strategy: no deviation
    rep = deviation_steps(limsup_ex, prof, limsup_ex_profiles["s1"])
    assert rep.classification == "none"


def test_infinitely_deviating(liminf_ex, liminf_ex_thick_profile):
    dev = MooreStrategy.positional(liminf_ex, "p2", {"v1": "v0", "v3": "v3"})
    rep = deviation_steps(liminf_ex, liminf_ex_thick_profile, dev)
    assert rep.classification == "infinitely-deviating"


def test_one_shot_variant(liminf_ex, liminf_ex_thick_profile):
    dev = one_shot_variant(liminf_ex, liminf_ex_thick_profile, "p2", "v1", "v0")
    dev.validate(liminf_ex)
    # examined from v1, the single step is at position 0: one-shot
    rep = deviation_steps(liminf_ex, liminf_ex_thick_profile, dev, start="v1")
    assert rep.classification == "one-shot"
    assert rep.steps[0].taken == "v0"
    # examined from v0, the same single step sits at position 1
    rep = deviation_steps(liminf_ex, liminf_ex_thick_profile, dev)
    assert rep.classification == "finitely-deviating"
    assert len(rep.steps) == 1
    with pytest.raises(InputError, match="not a successor"):
        one_shot_variant(liminf_ex, liminf_ex_thick_profile, "p2", "v1", "v2")
    with pytest.raises(InputError, match="not owned"):
        one_shot_variant(liminf_ex, liminf_ex_thick_profile, "p1", "v1", "v0")


@given(st.integers(min_value=0, max_value=80),
       st.sampled_from(["reachability", "liminf", "limsup"]))
def test_profile_json_round_trip(seed, mode):
    game = gen.gen_game(seed, mode)
    prof = gen.gen_profile(game, seed)
    again = Profile.from_json(game, prof.to_json())
    assert again.to_json() == prof.to_json()
    assert outcome(game, again) == outcome(game, prof)


def test_positional_shorthand_round_trip(liminf_ex):
    obj = {"p1": {"positional": {"v0": "v1", "v2": "v2"}},
           "p2": {"positional": {"v1": "v3", "v3": "v3"}}}
    prof = Profile.from_json(liminf_ex, obj)
    assert outcome(liminf_ex, prof) == LassoPlay.parse("v0,v1|v3")
