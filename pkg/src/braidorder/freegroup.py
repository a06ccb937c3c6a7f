"""Reduced-word arithmetic in the free group F_n = <x_1, ..., x_n>.

A word is a tuple of nonzero signed integers: ``i`` stands for the generator
``x_i`` and ``-i`` for its inverse.  Every function here returns freely reduced
tuples; the empty tuple is the identity.  Tuples are used directly (rather
than a wrapper class) because the cone search manipulates millions of them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Sequence

Word = tuple[int, ...]

IDENTITY: Word = ()

DEFAULT_BALL_CAP = 10**7


class WordError(ValueError):
    """Raised for malformed letters or unparseable word text."""


class BallTooLarge(RuntimeError):
    """Raised when a word ball would exceed the configured member budget."""

    def __init__(self, n: int, k: int, size: int, cap: int):
        super().__init__(f"ball of radius {k} in F_{n} has {size} members, cap is {cap}")
        self.n, self.k, self.size, self.cap = n, k, size, cap


def _check_letters(letters: Sequence[int], n: int | None) -> None:
    for a in letters:
        if a == 0 or (n is not None and abs(a) > n):
            raise WordError(f"invalid letter {a!r} for rank {n}")


def reduce(letters: Iterable[int], n: int | None = None) -> Word:
    """Freely reduce a sequence of signed generator indices.

    >>> reduce([1, 2, -2, 1])
    (1, 1)
    >>> reduce([1, -1])
    ()
    """
    letters = list(letters)
    _check_letters(letters, n)
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def mul(a: Word, b: Word) -> Word:
    """Product of two reduced words; only the junction can cancel."""
    if not a:
        return b
    if not b:
        return a
    i, la, lb = 0, len(a), len(b)
    while i < la and i < lb and a[la - 1 - i] == -b[i]:
        i += 1
    if i == 0:
        return a + b
    return a[: la - i] + b[i:]


def mul_many(*words: Word) -> Word:
    out = IDENTITY
    for w in words:
        out = mul(out, w)
    return out


def inv(a: Word) -> Word:
    return tuple(-x for x in reversed(a))


def power(a: Word, e: int) -> Word:
    base = a if e >= 0 else inv(a)
    out = IDENTITY
    for _ in range(abs(e)):
        out = mul(out, base)
    return out


def conj(g: Word, h: Word) -> Word:
    """Return ``h g h^-1`` (written ``g^h`` in proofs)."""
    return mul(mul(h, g), inv(h))


def cyclic_decomposition(a: Word) -> tuple[Word, Word]:
    """Split ``a = u c u^-1`` with ``c`` cyclically reduced; returns ``(u, c)``."""
    i, n = 0, len(a)
    while 2 * i + 1 < n and a[i] == -a[n - 1 - i]:
        i += 1
    return a[:i], a[i : n - i]


def conjugacy_key(a: Word) -> Word:
    """Canonical representative of the conjugacy class of ``a``.

    The least rotation (by tuple order) of the cyclic reduction.
    """
    _, c = cyclic_decomposition(a)
    if len(c) <= 1:
        return c
    return min(c[s:] + c[:s] for s in range(len(c)))


def conjugator_between(v: Word, w: Word) -> Word | None:
    """A shortest ``h`` with ``h v h^-1 == w``, or ``None`` if they are not conjugate."""
    a, c = cyclic_decomposition(v)
    b, d = cyclic_decomposition(w)
    if len(c) != len(d):
        return None
    if not c:
        return IDENTITY
    best = None
    for s in range(len(c)):
        if c[s:] + c[:s] == d:
            # d = t^-1 c t = u c u^-1 where c = t u
            for x in (inv(c[:s]), c[s:]):
                h = mul(mul(b, x), inv(a))
                if best is None or sort_key(h) < sort_key(best):
                    best = h
    return best


def exp_sum(a: Word) -> int:
    return sum(1 if x > 0 else -1 for x in a)


def letter_rank(a: int) -> int:
    """Position of a letter in the alphabet x1 < x1^-1 < x2 < x2^-1 < ..."""
    return 2 * abs(a) - (2 if a > 0 else 1)


def sort_key(a: Word) -> tuple[int, tuple[int, ...]]:
    return len(a), tuple(2 * abs(x) - (2 if x > 0 else 1) for x in a)


def compare_words(a: Word, b: Word) -> int:
    """Shortlex comparison: -1 if ``a`` comes first, 0 if equal, 1 otherwise."""
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


def alphabet(n: int) -> list[int]:
    """Letters in canonical order: 1, -1, 2, -2, ..., n, -n."""
    return [s * i for i in range(1, n + 1) for s in (1, -1)]


def sphere_size(n: int, length: int) -> int:
    """Number of reduced words of exactly the given length."""
    if length == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (length - 1)


def ball_size(n: int, k: int) -> int:
    """Number of nonidentity reduced words of length at most ``k``."""
    return sum(sphere_size(n, j) for j in range(1, k + 1))


@dataclass(frozen=True)
class WordBall:
    rank: int
    radius: int
    mode: str
    members: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, w: object) -> bool:
        return w in self.member_set

    @property
    def member_set(self) -> frozenset[Word]:
        s = self.__dict__.get("_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_set", s)
        return s

    def pairs(self) -> list[Word]:
        """One representative per inverse pair, the shortlex-least of the two."""
        return [w for w in self.members if sort_key(w) < sort_key(inv(w))]


MODES = ("all", "zero")


def enumerate_ball(n: int, k: int, mode: str = "all", cap: int = DEFAULT_BALL_CAP) -> WordBall:
    """All nonidentity reduced words of length <= k, in shortlex order.

    ``mode="zero"`` keeps only the words of exponent sum zero.
    """
    if n < 2 or k < 1:
        raise ValueError(f"need n >= 2 and k >= 1, got n={n}, k={k}")
    if mode not in MODES:
        raise ValueError(f"unknown ball mode {mode!r}")
    size = ball_size(n, k)
    if size > cap:
        raise BallTooLarge(n, k, size, cap)
    letters = alphabet(n)
    members: list[Word] = []
    layer: list[Word] = [()]
    for _ in range(k):
        # extending shortlex-sorted words by sorted letters keeps the layer sorted
        layer = [w + (a,) for w in layer for a in letters if not w or w[-1] != -a]
        if mode == "all":
            members.extend(layer)
        else:
            members.extend(w for w in layer if exp_sum(w) == 0)
    return WordBall(n, k, mode, tuple(members))


def brute_force_ball(n: int, k: int) -> list[Word]:
    """Reference enumeration by filtering every letter string for reducedness."""
    letters = alphabet(n)
    out = []
    for length in range(1, k + 1):
        for s in _cartesian(letters, repeat=length):
            if all(s[i] != -s[i + 1] for i in range(length - 1)):
                out.append(tuple(s))
    return out


# ---------------------------------------------------------------------------
# text form

def format_word(w: Word) -> str:
    """Render as ``x1^-1 x2``; the identity renders as ``1``."""
    if not w:
        return "1"
    return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in w)


_TOKEN = re.compile(r"x(\d+)(?:\^(-?\d+))?")


def parse_word(text: str, n: int | None = None) -> Word:
    """Parse ``x1^-1 x2``, ``x1^2``, ``1`` or the array form ``[-1, 2]``."""
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise WordError(f"unterminated array: {text!r}")
        body = s[1:-1].strip()
        try:
            letters = [int(t) for t in body.split(",")] if body else []
        except ValueError:
            raise WordError(f"bad integer in {text!r}") from None
        return reduce(letters, n)
    if s in ("", "1"):
        return IDENTITY
    letters = []
    for tok in s.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise WordError(f"bad token {tok!r} in {text!r}")
        gen = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        letters.extend([gen if e > 0 else -gen] * abs(e))
    return reduce(letters, n)
