import random

import pytest

from braidorder.braidact import FreeAutomorphism, apply, braid_to_auto, inner_reduce, invert_braid, parse_braid
from braidorder.cones import (
    SEED,
    ConeState,
    Contradiction,
    Derivation,
    SearchOptions,
    pos_lift,
    replay,
    saturate,
    seeded,
)
from braidorder.family import W, family_auto, family_inverse
from braidorder.freegroup import conj, enumerate_ball, exp_sum, inv, mul

ID2 = FreeAutomorphism.identity(2)
ID3 = FreeAutomorphism.identity(3)
ALL = SearchOptions(mode="all", strict=True)
ZERO_STRICT = SearchOptions(mode="zero", strict=True)


def manual_state(n, k, words, options=ZERO_STRICT):
    s = ConeState.empty(n, k, ID3 if n == 3 else ID2, ID3 if n == 3 else ID2, options)
    for w in words:
        s.P[w] = SEED
        s.members.append(w)
    return s


def test_trivial_fixed_point():
    s = ConeState.empty(3, 1, ID3, ID3, ALL).extend([(1,)])
    assert s.cone() == {(1,)}


def test_family_first_case_contradicts():
    for m in (-2, 0, 1):
        f = family_auto(m).f
        for k in (4, 5):
            ball = enumerate_ball(3, k, "zero")
            res = seeded(ball, f, family_inverse(m), [(-1, 2), (-2, 3), (3, -2)], SearchOptions(strict=True))
            assert isinstance(res, Contradiction)


def test_inverse_pair_is_immediate():
    v = mul((-2, -2), W)
    assert exp_sum(v) == 0
    res = ConeState.empty(3, 6, ID3, ID3, ZERO_STRICT).extend([v, inv(v)])
    assert isinstance(res, Contradiction)
    assert {res.witness, res.inverse} == {v, inv(v)}


def test_identity_seed_contradicts():
    assert isinstance(ConeState.empty(3, 2, ID3, ID3).extend([()]), Contradiction)


def test_is_total_examples():
    s = ConeState.empty(2, 1, ID2, ID2, ALL)
    s.P.update({(1,): SEED, (2,): SEED})
    s.members += [(1,), (2,)]
    assert s.is_total()
    assert not ConeState.empty(3, 1, ID3, ID3, ALL).extend([(1,)]).is_total()
    pairs = enumerate_ball(3, 2, "zero").pairs()
    assert len(pairs) == 6
    assert manual_state(3, 2, pairs).is_total()


def test_next_undecided_examples():
    s = ConeState.empty(3, 2, ID3, ID3, ZERO_STRICT).extend([(-1, 2)])
    assert s.cone() == {(-1, 2), (2, -1)}
    # x1 x3^-1 precedes x1^-1 x3 because x1 < x1^-1 in the alphabet
    assert s.next_undecided() == (1, -3)
    rest = [w for w in enumerate_ball(3, 2, "zero").pairs() if w not in ((-2, 3), (-3, 2))]
    assert manual_state(3, 2, rest).next_undecided() == (-2, 3)
    with pytest.raises(ValueError):
        manual_state(3, 2, enumerate_ball(3, 2, "zero").pairs()).next_undecided()


def test_pos_lift_examples():
    assert pos_lift(set(), 2, 1) == {(1,), (2,)}
    assert pos_lift(set(), 3, 1) == {(1,), (2,), (3,)}


def test_derivations_replay():
    b = parse_braid("s1 s2^-3")
    fwd, _ = inner_reduce(braid_to_auto(b))
    bwd, _ = inner_reduce(braid_to_auto(invert_braid(b)))
    s = ConeState.empty(3, 4, fwd, bwd, SearchOptions(conjugacy=False)).extend([(-1, 2)])
    assert not isinstance(s, Contradiction)
    for w, d in s.derivations().items():
        if d.rule in ("seed", "branch"):
            continue
        assert replay(d, fwd, bwd) == w


def test_state_invariants_and_closure():
    b = parse_braid("s1 s2^-2")
    fwd, bwd = braid_to_auto(b), braid_to_auto(invert_braid(b))
    s = ConeState.empty(3, 4, fwd, bwd, ZERO_STRICT).extend([(-1, 2)])
    assert not isinstance(s, Contradiction)
    P, E = set(s.P), set(s.E)
    assert not (P & E) and () not in P | E
    assert all(len(w) <= 4 and exp_sum(w) == 0 for w in P)
    assert all(len(w) > 4 for w in E)
    ball = s.ball
    for a in P:
        assert apply(fwd, a) in P | E
        assert apply(bwd, a) in P | E
        for g in [(1,), (-1,), (2,), (-2,), (3,), (-3,)]:
            c = conj(a, g)
            assert c not in ball or c in P
        for c in P:
            p = mul(a, c)
            assert p not in ball or p in P


def test_saturation_order_independent():
    b = parse_braid("s1 s2^-2")
    fwd, bwd = braid_to_auto(b), braid_to_auto(invert_braid(b))
    seeds = [(-1, 2), (1, -3), (2, -3)]
    results = set()
    rng = random.Random(7)
    for _ in range(4):
        rng.shuffle(seeds)
        s = ConeState.empty(3, 4, fwd, bwd, ZERO_STRICT)
        for w in seeds:
            s = s.extend([w])
            assert not isinstance(s, Contradiction)
        results.add(s.cone())
    assert len(results) == 1


def test_saturation_is_monotone_and_idempotent():
    s = ConeState.empty(3, 4, ID3, ID3, ZERO_STRICT).extend([(-1, 2)])
    again = saturate(s)
    assert again.cone() == s.cone()
    bigger = s.extend([(1, -3)])
    assert s.cone() < bigger.cone()


def test_states_are_values():
    s = ConeState.empty(3, 4, ID3, ID3, ZERO_STRICT).extend([(-1, 2)])
    before = s.cone()
    s.extend([(1, -3)])
    s.extend([(-1, 3)])
    assert s.cone() == before


def test_contradiction_rules_by_option():
    # at radius 2 the word x3 y^-1 x3^-1 only fits in the overflow set; closing
    # y under conjugation puts x3 y x3^-1 there too
    y = (-1, 2)
    long = conj(inv(y), (3,))
    ball = enumerate_ball(3, 2, "zero")
    strict = seeded(ball, ID3, ID3, [y, long], SearchOptions(strict=True))
    assert not isinstance(strict, Contradiction)
    assert long in strict.overflow() and inv(long) in strict.overflow()
    plain = seeded(ball, ID3, ID3, [y, long], SearchOptions(conjugacy=False))
    assert isinstance(plain, Contradiction) and plain.via is None
    by_class = seeded(ball, ID3, ID3, [y, long], SearchOptions())
    assert isinstance(by_class, Contradiction)
    v, h = by_class.via
    assert conj(v, h) == by_class.inverse
    assert v in by_class.derivations


def test_mode_mismatch_rejected():
    with pytest.raises(ValueError):
        ConeState(enumerate_ball(3, 2, "all"), ID3, ID3, ZERO_STRICT)


def test_derivation_defaults():
    assert Derivation("product", ((1,), (2,))).args == ((1,), (2,))
    assert SEED.args == ()
