"""The braids s1 s2^(2m+1) and a mechanical replay of why none is order-preserving.

For an integer ``m`` let ``w = x2^-1 x1 x2 x3`` and let ``f`` be the automorphism

    x1 -> w^-m x2 w^m,   x2 -> x2^-1 x1 x2 x3 x2^-1 x1^-1 x2,   x3 -> x2^-1 x1 x2.

Assuming ``y = x1^-1 x2`` is positive, each choice of sign for ``x2^-1 x3``
forces both some word and its inverse into the cone.  :func:`replay_family_proof`
recomputes every identity that argument relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braidact import BraidWord, FreeAutomorphism, apply, braid_to_auto, compose, inner, invert_braid
from .freegroup import IDENTITY, Word, conj, inv, mul, mul_many, power

W: Word = (-2, 1, 2, 3)


@dataclass(frozen=True)
class FamilyAutomorphism:
    m: int
    f: FreeAutomorphism


def family_auto(m: int) -> FamilyAutomorphism:
    images = (
        mul_many(power(W, -m), (2,), power(W, m)),
        (-2, 1, 2, 3, -2, -1, 2),
        (-2, 1, 2),
    )
    return FamilyAutomorphism(m, FreeAutomorphism(3, images))


def family_braid(m: int) -> BraidWord:
    """The braid ``s1 s2^(2m+1)``."""
    e = 2 * m + 1
    return BraidWord(3, (1,) + ((2,) if e > 0 else (-2,)) * abs(e))


def matching_braid(m: int) -> BraidWord:
    """The family braid whose action differs from ``f`` by an inner automorphism.

    With braids acting right to left this is ``s1 s2^-(2m+1)``, the member
    with index ``-m-1``.
    """
    return family_braid(-m - 1)


def inner_part(m: int) -> Word:
    """The ``c`` with ``f = (g -> c g c^-1) o matching_braid(m)``, namely ``w^-m``."""
    c = power(W, -m)
    if compose(inner(c, 3), braid_to_auto(matching_braid(m))) != family_auto(m).f:
        raise AssertionError(f"f is not inner-equivalent to the matching braid for m={m}")
    return c


def family_inverse(m: int) -> FreeAutomorphism:
    """``f^-1 = beta^-1 o (g -> c^-1 g c)`` where ``f = (g -> c g c^-1) o beta``."""
    beta_inv = braid_to_auto(invert_braid(matching_braid(m)))
    return compose(beta_inv, inner(inv(power(W, -m)), 3))


def family_identities(m: int) -> list[tuple[str, Word, Word]]:
    """(name, computed, expected) for each identity the argument uses."""
    f = family_auto(m).f
    y = (-1, 2)
    a = (-2, 3)
    wm = power(W, m)
    out = []
    out.append(("(i) f(x2^-1 x3) = x2^-1 x1 x2 x3^-1", apply(f, a), (-2, 1, 2, -3)))
    out.append(("(ii) x1^-1 x2 f(x2^-1 x3) x3 x2^-1 = 1", mul_many(y, apply(f, a), (3, -2)), IDENTITY))
    lhs = mul(conj(y, (3,)), apply(f, inv(a)))
    out.append(("(iii) x3 (x1^-1 x2) x3^-1 f(x3^-1 x2) = x3 x1^-2 x2", lhs, (3, -1, -1, 2)))
    expected = mul_many((-2, 1, 2), inv(wm), (-2, -2), mul(wm, W), (-2, -1, 2))
    out.append(("(iv) f(x3 x1^-2 x2) = x2^-1 x1 x2 w^-m x2^-2 w^(m+1) x2^-1 x1^-1 x2", apply(f, (3, -1, -1, 2)), expected))
    # conjugating the previous image by (x2^-1 x1 x2 w^-m)^-1 leaves x2^-2 w
    h = inv(mul((-2, 1, 2), inv(wm)))
    out.append(("(iv') conjugate of f(x3 x1^-2 x2) = x2^-2 w", conj(expected, h), mul((-2, -2), W)))
    inner_word = mul(conj((-2, 1), (-2,)), (3, -2))
    out.append(("(v) x2^-1 [x2^-1 (x2^-1 x1) x2 x3 x2^-1] x2 = x2^-2 w", conj(inner_word, (-2,)), mul((-2, -2), W)))
    return out


@dataclass(frozen=True)
class ReplayResult:
    m: int
    ok: bool
    failed: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def replay_family_proof(m: int) -> ReplayResult:
    for name, got, want in family_identities(m):
        if got != want:
            return ReplayResult(m, False, name)
    return ReplayResult(m, True)
