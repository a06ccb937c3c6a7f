"""Prospective positive cones and their saturation.

A :class:`ConeState` holds the words already forced into the cone ``P`` (all of
length at most ``k``) and, in zero-sum mode, the overflow set ``E`` of longer
words that were derived but are never fed back into the closure.  Every stored
word carries the :class:`Derivation` that first produced it, which is what the
certificate module walks to build replayable proofs.

Saturation closes ``P`` under products, conjugation by single generators,
and the forward and inverse braid automorphisms, restricted to the ball.
"""

from __future__ import annotations

from collections import ChainMap, deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .braidact import FreeAutomorphism, apply
from .freegroup import (
    DEFAULT_BALL_CAP,
    IDENTITY,
    Word,
    WordBall,
    alphabet,
    conj,
    conjugacy_key,
    conjugator_between,
    enumerate_ball,
    exp_sum,
    inv,
    mul,
    sort_key,
)

RULES = ("seed", "branch", "product", "conj_gen", "forward", "inverse")


class Derivation(NamedTuple):
    """How a word entered the cone.

    ``args`` holds the parent words; for ``conj_gen`` it is
    ``((letter,), parent)`` and the result is ``letter parent letter^-1``.
    """

    rule: str
    args: tuple[Word, ...] = ()


SEED = Derivation("seed")
BRANCH = Derivation("branch")


def replay(d: Derivation, forward: FreeAutomorphism, inverse: FreeAutomorphism) -> Word:
    """Recompute the word a derivation claims to produce from its parents."""
    if d.rule == "product":
        a, b = d.args
        return mul(a, b)
    if d.rule == "conj_gen":
        g, a = d.args
        return conj(a, g)
    if d.rule == "forward":
        return apply(forward, d.args[0])
    if d.rule == "inverse":
        return apply(inverse, d.args[0])
    raise ValueError(f"rule {d.rule!r} has nothing to replay")


@dataclass(frozen=True)
class Contradiction:
    """Both ``witness`` and its inverse were derived.

    ``derivations`` maps every word of the offending state to its derivation,
    enough to walk either word back to seeds and branch assumptions.
    """

    witness: Word
    derivations: ChainMap = field(repr=False, compare=False)
    via: tuple[Word, Word] | None = None

    # ``via = (v, h)``: the inverse of the witness is ``h v h^-1`` for a derived
    # word ``v`` rather than itself derived.

    @property
    def inverse(self) -> Word:
        return inv(self.witness)


@dataclass(frozen=True)
class SearchOptions:
    mode: str = "zero"                # "all": whole ball, "zero": exponent-sum-zero words
    strict: bool = False              # only identity inside the ball counts as a contradiction
    conj_inverse_generators: bool = True
    conjugacy: bool = True            # non-strict zero mode: match inverse conjugacy classes
    ball_cap: int = DEFAULT_BALL_CAP


class ConeState:
    """Saturated or partially saturated prospective cone.

    Instances are treated as values: :meth:`extend` and :func:`saturate` return
    new states and never touch the receiver.  Children share their parent's
    dictionaries through ``ChainMap`` layers, so branching is cheap.
    """

    def __init__(
        self,
        ball: WordBall,
        forward: FreeAutomorphism,
        inverse: FreeAutomorphism,
        options: SearchOptions = SearchOptions(),
    ):
        if ball.mode != options.mode:
            raise ValueError(f"ball mode {ball.mode!r} does not match options mode {options.mode!r}")
        self.ball = ball
        self.k = ball.radius
        self.rank = ball.rank
        self.forward = forward
        self.inverse = inverse
        self.options = options
        self.P: ChainMap = ChainMap({})
        self.E: ChainMap = ChainMap({})
        self.classes: ChainMap = ChainMap({})
        self.members: list[Word] = []
        self._cursor = 0
        letters = alphabet(self.rank)
        if not options.conj_inverse_generators:
            letters = [a for a in letters if a > 0]
        self._conjugators = [(a,) for a in letters]

    @classmethod
    def empty(
        cls,
        n: int,
        k: int,
        forward: FreeAutomorphism,
        inverse: FreeAutomorphism,
        options: SearchOptions = SearchOptions(),
    ) -> ConeState:
        return cls(enumerate_ball(n, k, options.mode, options.ball_cap), forward, inverse, options)

    def _child(self) -> ConeState:
        c = object.__new__(ConeState)
        c.__dict__.update(self.__dict__)
        c.P = self.P.new_child()
        c.E = self.E.new_child()
        c.classes = self.classes.new_child()
        c.members = list(self.members)
        return c

    # -- queries -------------------------------------------------------------

    def __contains__(self, w: Word) -> bool:
        return w in self.P

    def derivations(self) -> ChainMap:
        return ChainMap(*self.P.maps, *self.E.maps)

    def cone(self) -> frozenset[Word]:
        return frozenset(self.members)

    def overflow(self) -> frozenset[Word]:
        return frozenset(self.E)

    def is_total(self) -> bool:
        """Every ball word or its inverse lies in ``P`` (``E`` never counts)."""
        return 2 * len(self.members) >= len(self.ball)

    def next_undecided(self) -> Word:
        """Shortlex-least ball word with neither itself nor its inverse in ``P``."""
        members = self.ball.members
        P = self.P
        i = self._cursor
        while i < len(members):
            w = members[i]
            if w not in P and inv(w) not in P:
                self._cursor = i
                return w
            i += 1
        raise ValueError("cone is total: no undecided word")

    def in_ball(self, w: Word) -> bool:
        if len(w) > self.k:
            return False
        return self.options.mode == "all" or exp_sum(w) == 0

    # -- closure ---------------------------------------------------------------

    def extend(self, words: Iterable[Word], derivation: Derivation = SEED) -> ConeState | Contradiction:
        """Add ``words`` with the given derivation and saturate."""
        s = self._child()
        fresh = []
        for w in sorted(set(words), key=sort_key):
            if not w:
                return Contradiction(IDENTITY, s.derivations())
            if w in s.P or w in s.E:
                continue
            bad = s._insert(w, derivation)
            if bad is not None:
                return bad
            if len(w) <= s.k:
                fresh.append(w)
        return s._saturate(fresh)

    @property
    def _by_class(self) -> bool:
        o = self.options
        return o.mode == "zero" and not o.strict and o.conjugacy

    def _insert(self, w: Word, d: Derivation) -> Contradiction | None:
        """Record a new word, returning a contradiction if its inverse is known."""
        if len(w) <= self.k:
            if self.options.mode == "zero" and exp_sum(w) != 0:
                raise ValueError(f"word {w} has nonzero exponent sum in zero-sum mode")
            self.P[w] = d
            self.members.append(w)
        elif self.options.mode == "all":
            return None
        else:
            self.E[w] = d
        w_inv = inv(w)
        if self._by_class:
            v = self.classes.get(conjugacy_key(w_inv))
            if v is not None:
                h = conjugator_between(v, w_inv)
                return Contradiction(w, self.derivations(), None if v == w_inv else (v, h))
            self.classes.setdefault(conjugacy_key(w), w)
            return None
        if w_inv in self.P or (not self.options.strict and w_inv in self.E):
            return Contradiction(w, self.derivations())
        return None

    def _offer(self, w: Word, d: Derivation, queue: deque) -> Contradiction | None:
        if not w:
            # only a product can collapse to the identity, and then its factors are inverse
            return Contradiction(d.args[0], self.derivations())
        if len(w) <= self.k:
            if w in self.P:
                return None
            bad = self._insert(w, d)
            queue.append(w)
            return bad
        if self.options.mode == "all" or w in self.E:
            return None
        return self._insert(w, d)

    def _saturate(self, fresh: list[Word]) -> ConeState | Contradiction:
        queue = deque(fresh)
        members = self.members
        fwd, bwd = self.forward, self.inverse
        conjugators = self._conjugators
        offer = self._offer
        while queue:
            x = queue.popleft()
            for d in (
                Derivation("forward", (x,)),
                Derivation("inverse", (x,)),
            ):
                img = apply(fwd if d.rule == "forward" else bwd, x)
                bad = offer(img, d, queue)
                if bad is not None:
                    return bad
            for g in conjugators:
                bad = offer(conj(x, g), Derivation("conj_gen", (g, x)), queue)
                if bad is not None:
                    return bad
            for i in range(len(members)):
                p = members[i]
                bad = offer(mul(x, p), Derivation("product", (x, p)), queue)
                if bad is not None:
                    return bad
                if p != x:
                    bad = offer(mul(p, x), Derivation("product", (p, x)), queue)
                    if bad is not None:
                        return bad
        return self


def saturate(state: ConeState) -> ConeState | Contradiction:
    """Least fixed point of the closure over the words currently in ``state``."""
    fresh = list(state.members)
    s = ConeState(state.ball, state.forward, state.inverse, state.options)
    for w in fresh:
        s.P[w] = state.P[w]
        s.members.append(w)
    for w in state.E:
        s.E[w] = state.E[w]
    s.classes.update(state.classes)
    return s._saturate(fresh)


def seeded(
    ball: WordBall,
    forward: FreeAutomorphism,
    inverse: FreeAutomorphism,
    seed: Iterable[Word],
    options: SearchOptions = SearchOptions(),
) -> ConeState | Contradiction:
    return ConeState(ball, forward, inverse, options).extend(seed, SEED)


def pos_lift(Q: Iterable[Word], n: int, k: int) -> frozenset[Word]:
    """Q together with every word of length <= k and positive exponent sum."""
    positive = (w for w in enumerate_ball(n, k, "all").members if exp_sum(w) > 0)
    return frozenset(Q) | frozenset(positive)
