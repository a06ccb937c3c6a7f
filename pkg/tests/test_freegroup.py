import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidorder.freegroup import (
    IDENTITY,
    BallTooLarge,
    WordError,
    ball_size,
    brute_force_ball,
    compare_words,
    conj,
    conjugacy_key,
    conjugator_between,
    enumerate_ball,
    exp_sum,
    format_word,
    inv,
    mul,
    mul_many,
    parse_word,
    power,
    reduce,
    sort_key,
    sphere_size,
)

letters3 = st.sampled_from([1, -1, 2, -2, 3, -3])
raw = st.lists(letters3, max_size=14)
words = raw.map(reduce)


@pytest.mark.parametrize(
    "letters, expected",
    [([1, -1], ()), ([1, 2, -2, 1], (1, 1)), ([-2, 1, 2, 3], (-2, 1, 2, 3))],
)
def test_reduce_examples(letters, expected):
    assert reduce(letters) == expected


def test_reduce_rejects_bad_letters():
    with pytest.raises(WordError):
        reduce([0])
    with pytest.raises(WordError):
        reduce([4], n=3)


def test_mul_examples():
    y, fimg = (-1, 2), (-2, 1, 2, -3)
    assert mul(y, fimg) == (2, -3)
    assert mul_many(y, fimg, (3, -2)) == IDENTITY
    assert mul((1, 2), IDENTITY) == (1, 2)
    assert mul((3, -1, 2, -3), (3, -2, -1, 2)) == (3, -1, -1, 2)


def test_inv_and_conj_examples():
    assert inv((-2, 3)) == (-3, 2)
    assert inv(IDENTITY) == IDENTITY
    assert inv((-2, 1, 2, 3)) == (-3, -2, -1, 2)
    assert conj((-1, 2), IDENTITY) == (-1, 2)
    assert conj((-1, 2), (3,)) == (3, -1, 2, -3)
    assert conj((2,), (-2, 1, 2)) == (-2, 1, 2, -1, 2)


def test_exp_sum_examples():
    assert exp_sum((-1, 2)) == 0
    assert exp_sum((3, -1, -1, 2)) == 0
    assert exp_sum((-2, 1, 2, 3)) == 2


def test_compare_examples():
    assert compare_words((1,), (-1, 2)) == -1
    assert compare_words((1, 2), (2, 1)) == -1
    assert compare_words((1, -2), (1, -2)) == 0
    # x1 < x1^-1 < x2 < ...
    assert compare_words((1,), (-1,)) == -1
    assert compare_words((-1,), (2,)) == -1


@pytest.mark.parametrize("n, k, mode, size", [(3, 1, "all", 6), (3, 2, "all", 36), (3, 2, "zero", 12)])
def test_ball_sizes(n, k, mode, size):
    assert len(enumerate_ball(n, k, mode)) == size


def test_ball_matches_brute_force_and_formula():
    for n in (2, 3):
        for k in range(1, 5):
            ball = enumerate_ball(n, k)
            assert set(ball.members) == set(brute_force_ball(n, k))
            assert len(ball) == ball_size(n, k) == sum(2 * n * (2 * n - 1) ** (j - 1) for j in range(1, k + 1))
            assert list(ball.members) == sorted(ball.members, key=sort_key)
            assert all(inv(w) in ball for w in ball.members)


def test_zero_ball_shape():
    for k in range(1, 6):
        ball = enumerate_ball(3, k, "zero")
        assert all(exp_sum(w) == 0 and len(w) % 2 == 0 for w in ball.members)
        assert all(inv(w) in ball for w in ball.members)
        assert set(ball.members) == {w for w in brute_force_ball(3, k) if exp_sum(w) == 0}


def test_ball_guards():
    with pytest.raises(ValueError):
        enumerate_ball(1, 2)
    with pytest.raises(ValueError):
        enumerate_ball(3, 0)
    with pytest.raises(BallTooLarge):
        enumerate_ball(3, 9, cap=1000)


def test_sphere_size():
    assert [sphere_size(3, j) for j in range(4)] == [1, 6, 30, 150]


def test_compare_is_total_order_on_ball():
    ball = enumerate_ball(2, 3).members
    for a, b in itertools.product(ball, repeat=2):
        assert compare_words(a, b) == -compare_words(b, a)
        assert (compare_words(a, b) == 0) == (a == b)
    keyed = sorted(ball, key=sort_key)
    for a, b in zip(keyed, keyed[1:]):
        assert compare_words(a, b) == -1


def test_power_and_format():
    w = (-2, 1, 2, 3)
    assert power(w, 0) == IDENTITY
    assert power(w, -1) == inv(w)
    assert power(w, 2) == w + w
    assert format_word((-1, 2)) == "x1^-1 x2"
    assert format_word(IDENTITY) == "1"


@pytest.mark.parametrize(
    "text, expected",
    [("x1^-1 x2", (-1, 2)), ("x3 x1^-2 x2", (3, -1, -1, 2)), ("1", ()), ("[-1, 2]", (-1, 2)), ("x1 x1^-1", ())],
)
def test_parse_word(text, expected):
    assert parse_word(text) == expected


@pytest.mark.parametrize("text", ["y1", "x1^", "[1, a]", "[1, 2", "x0"])
def test_parse_word_errors(text):
    with pytest.raises(WordError):
        parse_word(text)


@settings(max_examples=1000)
@given(raw)
def test_reduce_idempotent_and_inverse(s):
    w = reduce(s)
    assert reduce(w) == w
    assert mul(w, inv(w)) == IDENTITY
    assert parse_word(format_word(w)) == w


@settings(max_examples=1000)
@given(words, words, words)
def test_mul_associative(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, b) == reduce(a + b)


@given(words, words)
def test_exp_sum_homomorphism(a, b):
    assert exp_sum(mul(a, b)) == exp_sum(a) + exp_sum(b)


@given(words, words)
def test_conjugacy_helpers(v, h):
    w = conj(v, h)
    assert conjugacy_key(w) == conjugacy_key(v)
    g = conjugator_between(v, w)
    assert g is not None and conj(v, g) == w
    assert sort_key(g) <= sort_key(h)


def test_conjugator_between_rejects_non_conjugates():
    assert conjugator_between((1, 2), (1, -2)) is None
    assert conjugator_between((1,), (2,)) is None
