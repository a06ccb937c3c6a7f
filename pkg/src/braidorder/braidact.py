"""The Artin action of braids on the free group.

``sigma_i`` acts by ``x_i -> x_{i+1}``, ``x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}`` and
fixes the other generators.  Braid words are read right to left: the rightmost
letter acts first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .freegroup import IDENTITY, Word, WordError, alphabet, conj, inv, mul


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise ValueError(f"a braid needs at least 2 strands, got {self.strands}")
        for a in self.letters:
            if a == 0 or abs(a) > self.strands - 1:
                raise ValueError(f"braid letter {a} out of range for {self.strands} strands")

    def __str__(self) -> str:
        return format_braid(self)


@dataclass(frozen=True)
class FreeAutomorphism:
    rank: int
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.rank:
            raise ValueError(f"expected {self.rank} images, got {len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> FreeAutomorphism:
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def cost(self) -> tuple[int, int]:
        """(longest image, total image length), the key minimised by inner_reduce."""
        lengths = [len(im) for im in self.images]
        return max(lengths), sum(lengths)


def generator_action(i: int, n: int, sign: int = 1) -> FreeAutomorphism:
    if not 1 <= i <= n - 1:
        raise ValueError(f"sigma_{i} does not exist on {n} strands")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    images = [(j,) for j in range(1, n + 1)]
    a, b = i, i + 1
    if sign == 1:
        images[a - 1] = (b,)
        images[b - 1] = (-b, a, b)
    else:
        images[a - 1] = (a, b, -a)
        images[b - 1] = (a,)
    return FreeAutomorphism(n, tuple(images))


def apply(phi: FreeAutomorphism, w: Word) -> Word:
    images = phi.images
    out: Word = IDENTITY
    for a in w:
        if a == 0 or abs(a) > phi.rank:
            raise WordError(f"letter {a} outside rank {phi.rank}")
        out = mul(out, images[a - 1] if a > 0 else inv(images[-a - 1]))
    return out


def compose(phi: FreeAutomorphism, chi: FreeAutomorphism) -> FreeAutomorphism:
    """``phi o chi``: apply ``chi`` first, then ``phi``."""
    if phi.rank != chi.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {chi.rank}")
    return FreeAutomorphism(phi.rank, tuple(apply(phi, im) for im in chi.images))


def inner(c: Word, n: int) -> FreeAutomorphism:
    """Conjugation ``g -> c g c^-1``."""
    return FreeAutomorphism(n, tuple(conj((i,), c) for i in range(1, n + 1)))


def braid_to_auto(b: BraidWord) -> FreeAutomorphism:
    phi = FreeAutomorphism.identity(b.strands)
    # rightmost letter acts first, so it sits innermost
    for a in b.letters:
        phi = compose(phi, generator_action(abs(a), b.strands, 1 if a > 0 else -1))
    return phi


def invert_braid(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-a for a in reversed(b.letters)))


def inner_reduce(phi: FreeAutomorphism) -> tuple[FreeAutomorphism, Word]:
    """Shorten the images of ``phi`` by post-composing with an inner automorphism.

    Greedy descent on ``cost()``: conjugate all images by a single letter,
    taking the first letter (in alphabet order) that strictly lowers the cost,
    until none does.  Returns the reduced automorphism and the accumulated
    conjugator ``c``, so that the result is ``g -> c phi(g) c^-1``.
    """
    letters = alphabet(phi.rank)
    current, c = phi, IDENTITY
    best = current.cost()
    while True:
        for a in letters:
            cand = FreeAutomorphism(phi.rank, tuple(conj(im, (a,)) for im in current.images))
            key = cand.cost()
            if key < best:
                current, best, c = cand, key, mul((a,), c)
                break
        else:
            return current, c


# ---------------------------------------------------------------------------
# text form

_BRAID_TOKEN = re.compile(r"s(\d+)(?:\^(-?\d+))?")


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Parse ``s1 s2^-3`` or ``[1, -2, -2, -2]``.

    The strand count defaults to one more than the largest generator index.
    """
    s = text.strip()
    letters: list[int] = []
    if s.startswith("["):
        if not s.endswith("]"):
            raise WordError(f"unterminated braid array: {text!r}")
        body = s[1:-1].strip()
        try:
            letters = [int(t) for t in body.split(",")] if body else []
        except ValueError:
            raise WordError(f"bad integer in braid {text!r}") from None
        if any(a == 0 for a in letters):
            raise WordError("braid letters must be nonzero")
    elif s not in ("", "1", "e"):
        for tok in s.split():
            m = _BRAID_TOKEN.fullmatch(tok)
            if not m or int(m.group(1)) == 0:
                raise WordError(f"bad braid token {tok!r}")
            i = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([i if e > 0 else -i] * abs(e))
    if strands is None:
        strands = max((abs(a) for a in letters), default=1) + 1
    try:
        return BraidWord(strands, tuple(letters))
    except ValueError as exc:
        raise WordError(str(exc)) from None


def format_braid(b: BraidWord) -> str:
    if not b.letters:
        return "1"
    out, i = [], 0
    while i < len(b.letters):
        a, j = b.letters[i], i
        while j < len(b.letters) and b.letters[j] == a:
            j += 1
        e = (j - i) * (1 if a > 0 else -1)
        out.append(f"s{abs(a)}" if e == 1 else f"s{abs(a)}^{e}")
        i = j
    return " ".join(out)

