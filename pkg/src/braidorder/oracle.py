"""Exhaustive ground truth for small balls.

Every inverse pair ``{w, w^-1}`` of the ball is a boolean variable (which of
the two lies in the cone).  The cone axioms become implications between
variables:

* ``a, b in P  =>  ab in P``           whenever ``ab`` lies in the ball,
* ``a in P     =>  g a g^-1 in P``     for every ``g`` of length <= k,
* ``a in P     =>  beta(a) in P``      (and ``beta^-1``) when preservation is asked for.

All satisfying assignments are enumerated by depth-first search, rejecting a
partial assignment as soon as some implication whose variables are all set
fails.  Nothing here shares code with the saturation engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .braidact import BraidWord, FreeAutomorphism, apply, braid_to_auto, format_braid, invert_braid
from .freegroup import Word, conj, enumerate_ball, inv, mul, sort_key

DEFAULT_PAIR_CAP = 24


class OracleTooLarge(RuntimeError):
    def __init__(self, pairs: int, cap: int):
        super().__init__(f"ball has {pairs} inverse pairs, oracle cap is {cap}")
        self.pairs, self.cap = pairs, cap


@dataclass
class ConeCensus:
    n: int
    k: int
    mode: str
    braid: BraidWord | None
    total: int
    preserved: int
    witnesses: list[frozenset[Word]] = field(default_factory=list)

    def to_json(self, include_witnesses: bool = False) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "braid": list(self.braid.letters) if self.braid is not None else None,
            "total": self.total,
            "preserved": self.preserved,
        }
        if include_witnesses:
            out["witnesses"] = [sorted((list(w) for w in s), key=lambda w: sort_key(tuple(w))) for s in self.witnesses]
        return out

    def dumps(self, include_witnesses: bool = False) -> str:
        return json.dumps(self.to_json(include_witnesses), sort_keys=True)


class _Problem:
    """Variables and implication constraints for one ball."""

    def __init__(self, n: int, k: int, mode: str, cap: int):
        ball = enumerate_ball(n, k, mode)
        self.n, self.k, self.mode = n, k, mode
        self.reps = [w for w in ball.members if sort_key(w) < sort_key(inv(w))]
        if len(self.reps) > cap:
            raise OracleTooLarge(len(self.reps), cap)
        self.words = list(ball.members)
        self.var: dict[Word, int] = {}
        self.pol: dict[Word, bool] = {}
        for j, r in enumerate(self.reps):
            self.var[r], self.pol[r] = j, True
            self.var[inv(r)], self.pol[inv(r)] = j, False
        self.conjugators = list(enumerate_ball(n, k, "all").members)
        self.structural = self._structural()

    def lit(self, w: Word) -> tuple[int, bool]:
        return self.var[w], self.pol[w]

    def _structural(self) -> list[tuple]:
        clauses = []
        words, var = self.words, self.var
        for a in words:
            for b in words:
                c = mul(a, b)
                if c and c in var:
                    clauses.append((self.lit(a), self.lit(b), self.lit(c)))
            for g in self.conjugators:
                c = conj(a, g)
                if c != a and c in var:
                    clauses.append((self.lit(a), None, self.lit(c)))
        return clauses

    def action_clauses(self, phi: FreeAutomorphism) -> list[tuple]:
        out = []
        for a in self.words:
            c = apply(phi, a)
            if c in self.var:
                out.append((self.lit(a), None, self.lit(c)))
        return out


def _solutions(problem: _Problem, clauses: list[tuple], fixed: dict[int, bool]) -> Iterator[tuple[bool, ...]]:
    m = len(problem.reps)
    by_var: list[list[tuple]] = [[] for _ in range(m)]
    for cl in clauses:
        vs = [cl[0][0], cl[2][0]] + ([cl[1][0]] if cl[1] is not None else [])
        by_var[max(vs)].append(cl)
    x = [False] * m

    def holds(lit):
        return x[lit[0]] == lit[1]

    def ok(j: int) -> bool:
        for a, b, c in by_var[j]:
            if holds(a) and (b is None or holds(b)) and not holds(c):
                return False
        return True

    def dfs(j: int) -> Iterator[tuple[bool, ...]]:
        if j == m:
            yield tuple(x)
            return
        for value in ((fixed[j],) if j in fixed else (True, False)):
            x[j] = value
            if ok(j):
                yield from dfs(j + 1)

    yield from dfs(0)


def _cone(problem: _Problem, assignment: tuple[bool, ...]) -> frozenset[Word]:
    return frozenset(r if v else inv(r) for r, v in zip(problem.reps, assignment))


def enumerate_cones(n: int, k: int, mode: str = "all", *, cap: int = DEFAULT_PAIR_CAP) -> ConeCensus:
    """Every k-precone (``mode="all"``) or k-zerocone (``mode="zero"``) of F_n."""
    problem = _Problem(n, k, mode, cap)
    cones = [_cone(problem, s) for s in _solutions(problem, problem.structural, {})]
    return ConeCensus(n, k, mode, None, len(cones), len(cones), cones)


def enumerate_preserved(
    beta: BraidWord,
    k: int,
    mode: str = "all",
    require: Word | None = None,
    *,
    one_sided: bool = False,
    limit: int | None = None,
    cap: int = DEFAULT_PAIR_CAP,
) -> ConeCensus:
    """Cones closed (inside the ball) under ``beta`` and, unless ``one_sided``, ``beta^-1``.

    ``total`` counts all cones of the ball; ``limit`` stops after that many
    preserved witnesses (``total`` is then left as -1).
    """
    n = beta.strands
    problem = _Problem(n, k, mode, cap)
    clauses = list(problem.structural) + problem.action_clauses(braid_to_auto(beta))
    if not one_sided:
        clauses += problem.action_clauses(braid_to_auto(invert_braid(beta)))
    fixed: dict[int, bool] = {}
    if require is not None:
        if require not in problem.var:
            return ConeCensus(n, k, mode, beta, -1 if limit else 0, 0, [])
        fixed[problem.var[require]] = problem.pol[require]
    witnesses = []
    for s in _solutions(problem, clauses, fixed):
        witnesses.append(_cone(problem, s))
        if limit is not None and len(witnesses) >= limit:
            break
    if limit is None:
        total = sum(1 for _ in _solutions(problem, problem.structural, {}))
    else:
        total = -1
    return ConeCensus(n, k, mode, beta, total, len(witnesses), witnesses)


def exists_preserved(beta: BraidWord, k: int, mode: str, require: Word | None, **kw) -> bool:
    return enumerate_preserved(beta, k, mode, require, limit=1, **kw).preserved > 0


# ---------------------------------------------------------------------------
# literal axiom checks, used by tests on arbitrary sets

def is_precone(S: Iterable[Word], n: int, k: int, mode: str = "all") -> bool:
    """Check the three cone axioms on ``S`` directly."""
    S = frozenset(S)
    ball = enumerate_ball(n, k, mode)
    B = ball.member_set
    if not S <= B:
        return False
    for w in ball.members:
        if (w in S) == (inv(w) in S):
            return False
    for a in S:
        for b in S:
            c = mul(a, b)
            if c in B and c not in S:
                return False
    for g in enumerate_ball(n, k, "all").members:
        for a in S:
            c = conj(a, g)
            if c in B and c not in S:
                return False
    return True


def is_preserved(S: Iterable[Word], phi: FreeAutomorphism, k: int) -> bool:
    S = frozenset(S)
    return all(len(c) > k or c in S for c in (apply(phi, a) for a in S))


CROSSCHECK_PAIR_CAP = 200


def crosscheck(beta: BraidWord, k: int, *, cap: int = CROSSCHECK_PAIR_CAP) -> dict[str, bool | None]:
    """Compare the search engine with the oracle at radius ``k``.

    Returns ``{"all": ..., "zero": ...}``, each ``True`` when the search
    verdict matches the oracle, ``False`` on disagreement and ``None`` when
    that ball is beyond ``cap``.  Both searches run in strict mode without
    inner reduction, so they decide exactly the notion enumerated here.
    Existence queries stop at the first witness, which is why the default cap
    is far above the one used for full censuses.
    """
    from .search import mod_preserve_precone, preserve_precone

    out: dict[str, bool | None] = {}
    try:
        truth = exists_preserved(beta, k, "all", (1,), cap=cap)
        out["all"] = preserve_precone(beta, [(1,)], k).found == truth
    except OracleTooLarge:
        out["all"] = None
    seed = (-1, 2)
    try:
        # below radius 2 the zero-sum ball is empty and the seed is irrelevant
        truth = exists_preserved(beta, k, "zero", seed, cap=cap) if k >= 2 else True
        out["zero"] = mod_preserve_precone(beta, [seed], k, False, strict=True).found == truth
    except OracleTooLarge:
        out["zero"] = None
    return out


def format_census(c: ConeCensus) -> str:
    b = format_braid(c.braid) if c.braid is not None else "-"
    return f"n={c.n} k={c.k} mode={c.mode} braid={b} total={c.total} preserved={c.preserved}"


__all__ = [
    "ConeCensus",
    "OracleTooLarge",
    "crosscheck",
    "enumerate_cones",
    "enumerate_preserved",
    "exists_preserved",
    "is_precone",
    "is_preserved",
]
