"""Branching search for braid-invariant precones, and the increasing-k driver.

``preserve_precone`` searches the full ball ``W_k``; ``mod_preserve_precone``
searches only exponent-sum-zero words, remembers overflow words longer than
``k`` and can shorten the braid action by an inner automorphism first.
A ``NoPrecone`` answer at any ``k`` means the braid preserves no bi-order of
``F_n``: a preserved positive cone would restrict to a preserved precone at
every radius, and conjugating by an inner automorphism or passing to the
zero-sum subgroup changes nothing about which bi-orders are preserved.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .braidact import BraidWord, FreeAutomorphism, braid_to_auto, inner_reduce, invert_braid
from .certificate import Branch, Certificate, ProofNode, build_leaf
from .cones import BRANCH, ConeState, Contradiction, SearchOptions
from .freegroup import DEFAULT_BALL_CAP, IDENTITY, Word, enumerate_ball, exp_sum, inv

PRECONE_FOUND = "PreconeFound"
NO_PRECONE = "NoPrecone"

DEFAULT_SEED: Word = (-1, 2)
DEFAULT_MAX_K = 8


class SearchLimit(RuntimeError):
    """A resource limit (ball size or node budget) stopped the search."""

    def __init__(self, message: str, k: int | None = None):
        super().__init__(message)
        self.k = k


@dataclass
class SearchStats:
    nodes: int = 0
    max_cone_size: int = 0
    wall_ms: float = 0.0

    def absorb(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.max_cone_size = max(self.max_cone_size, other.max_cone_size)


@dataclass
class SearchResult:
    verdict: str
    k: int
    certificate: Certificate | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    cone: frozenset[Word] | None = None  # a total preserved set, when found

    @property
    def found(self) -> bool:
        return self.verdict == PRECONE_FOUND


@dataclass(frozen=True)
class Actions:
    forward: FreeAutomorphism
    inverse: FreeAutomorphism
    conjugators: tuple[Word, Word] = (IDENTITY, IDENTITY)


def braid_actions(beta: BraidWord, use_inner_reduction: bool) -> Actions:
    fwd = braid_to_auto(beta)
    bwd = braid_to_auto(invert_braid(beta))
    if not use_inner_reduction:
        return Actions(fwd, bwd)
    fwd, c1 = inner_reduce(fwd)
    bwd, c2 = inner_reduce(bwd)
    return Actions(fwd, bwd, (c1, c2))


# ---------------------------------------------------------------------------
# the branching engine

class _Frame:
    __slots__ = ("state", "alpha", "first")

    def __init__(self, state: ConeState, alpha: Word):
        self.state = state
        self.alpha = alpha
        self.first: ProofNode | None = None


def _explore(
    root: ConeState | Contradiction,
    stats: SearchStats,
    max_nodes: int | None,
) -> tuple[ProofNode | None, ConeState | None]:
    """Depth-first search from a saturated state.

    Returns ``(proof, None)`` when every branch ends in a contradiction, or
    ``(None, total_state)`` as soon as a total consistent cone is reached.
    The ``alpha`` branch is always explored before ``alpha^-1``.
    """
    stack: list[_Frame] = []
    result: ProofNode | None = None
    pending: ConeState | Contradiction | None = root
    while True:
        if pending is not None:
            node = pending
            pending = None
            stats.nodes += 1
            if max_nodes is not None and stats.nodes > max_nodes:
                raise SearchLimit(f"node budget {max_nodes} exhausted")
            if isinstance(node, Contradiction):
                result = build_leaf(node)
            else:
                stats.max_cone_size = max(stats.max_cone_size, len(node.members))
                if node.is_total():
                    return None, node
                alpha = node.next_undecided()
                stack.append(_Frame(node, alpha))
                pending = node.extend([alpha], BRANCH)
                continue
        # a subtree just closed with proof `result`
        if not stack:
            return result, None
        top = stack[-1]
        if top.first is None:
            top.first = result
            pending = top.state.extend([inv(top.alpha)], BRANCH)
        else:
            stack.pop()
            result = Branch(top.alpha, top.first, result)


def _explore_parallel(root: ConeState | Contradiction, stats: SearchStats, max_nodes, threads: int):
    """Explore the two subtrees below the root concurrently.

    The outcome, proof and statistics are those of the sequential run: when the
    ``alpha`` branch finds a cone, the sibling's work is discarded.
    """
    if isinstance(root, Contradiction) or root.is_total() or threads <= 1:
        return _explore(root, stats, max_nodes)
    stats.nodes += 1
    stats.max_cone_size = max(stats.max_cone_size, len(root.members))
    alpha = root.next_undecided()

    def run(word):
        local = SearchStats()
        child = root.extend([word], BRANCH)
        return _explore(child, local, max_nodes) + (local,)

    with ThreadPoolExecutor(max_workers=2) as pool:
        fut_a = pool.submit(run, alpha)
        fut_b = pool.submit(run, inv(alpha))
        proof_a, cone_a, stats_a = fut_a.result()
        stats.absorb(stats_a)
        if cone_a is not None:
            fut_b.cancel()
            return None, cone_a
        proof_b, cone_b, stats_b = fut_b.result()
    stats.absorb(stats_b)
    if cone_b is not None:
        return None, cone_b
    return Branch(alpha, proof_a, proof_b), None


def _run(
    beta: BraidWord,
    seed: Iterable[Word],
    k: int,
    actions: Actions,
    options: SearchOptions,
    max_nodes: int | None,
    threads: int,
    metadata: dict | None = None,
) -> SearchResult:
    start = time.perf_counter()
    n = beta.strands
    seed = sorted(set(seed))
    if any(not w for w in seed):
        raise ValueError("the identity cannot be a seed")
    try:
        ball = enumerate_ball(n, k, options.mode, options.ball_cap)
    except RuntimeError as exc:
        raise SearchLimit(str(exc), k) from exc
    if options.mode == "all":
        for w in seed:
            if not 1 <= len(w) <= k:
                raise ValueError(f"seed word {w} is not in the ball of radius {k}")
    state = ConeState(ball, actions.forward, actions.inverse, options)
    root = state.extend(seed)
    stats = SearchStats()
    try:
        proof, total = _explore_parallel(root, stats, max_nodes, threads)
    except SearchLimit as exc:
        exc.k = k
        raise
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    if total is not None:
        return SearchResult(PRECONE_FOUND, k, None, stats, total.cone())
    cert = Certificate(
        braid=beta,
        k=k,
        seed=tuple(sorted(seed)),
        inner_conjugators=actions.conjugators,
        root=proof,
        mode=options.mode,
        strict=options.strict,
        metadata=tuple(sorted((metadata or {}).items())),
    )
    return SearchResult(NO_PRECONE, k, cert, stats)


def preserve_precone(
    beta: BraidWord,
    seed: Iterable[Word],
    k: int,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    max_nodes: int | None = None,
    threads: int = 1,
    metadata: dict | None = None,
) -> SearchResult:
    """Search ``W_k`` for a precone containing ``seed``, closed under ``beta`` and ``beta^-1``."""
    opts = SearchOptions(mode="all", strict=True, ball_cap=ball_cap)
    return _run(beta, seed, k, braid_actions(beta, False), opts, max_nodes, threads, metadata)


def mod_preserve_precone(
    beta: BraidWord,
    seed: Iterable[Word],
    k: int,
    use_inner_reduction: bool = True,
    *,
    strict: bool = False,
    conjugacy: bool = True,
    ball_cap: int = DEFAULT_BALL_CAP,
    max_nodes: int | None = None,
    threads: int = 1,
    metadata: dict | None = None,
) -> SearchResult:
    """Zero-sum search with an overflow set of words longer than ``k``.

    ``strict`` restricts contradictions to inverse pairs inside the ball, which
    is exactly "the identity is derived"; otherwise an inverse pair among the
    overflow words also counts, and with ``conjugacy`` so does a derived word
    whose inverse is conjugate to another derived word.
    """
    opts = SearchOptions(mode="zero", strict=strict, conjugacy=conjugacy, ball_cap=ball_cap)
    actions = braid_actions(beta, use_inner_reduction)
    return _run(beta, seed, k, actions, opts, max_nodes, threads, metadata)


# ---------------------------------------------------------------------------
# driver

def check_seed(seed: list[Word], mode: str) -> None:
    """Reject seed sets that are not a harmless normalisation.

    A single nontrivial word may always be assumed positive, since otherwise
    the opposite cone is preserved as well.  In zero-sum mode every seed word
    must have exponent sum zero.
    """
    if len(set(seed)) != 1 or not seed[0]:
        raise ValueError("the seed must be a single nontrivial word")
    if mode == "zero" and exp_sum(seed[0]) != 0:
        raise ValueError("zero-sum search needs a seed of exponent sum zero")


@dataclass
class DriverResult:
    proven: bool
    k: int
    certificate: Certificate | None
    history: list[SearchResult]

    @property
    def outcome(self) -> str:
        return "ProvenNotOrderPreserving" if self.proven else "Inconclusive"


def obstruct(
    beta: BraidWord,
    max_k: int = DEFAULT_MAX_K,
    *,
    mode: str = "zero",
    use_inner_reduction: bool = True,
    strict: bool = False,
    conjugacy: bool = True,
    seed: Iterable[Word] | None = None,
    start_k: int = 1,
    ball_cap: int = DEFAULT_BALL_CAP,
    max_nodes: int | None = None,
    threads: int = 1,
    on_result=None,
    metadata: dict | None = None,
) -> DriverResult:
    """Run the search at k = start_k, start_k + 1, ... up to ``max_k``.

    Stops at the first radius with no preserved cone, which proves the braid is
    not order-preserving.  Never claims the opposite: surviving every radius up
    to ``max_k`` is reported as inconclusive.
    """
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    if seed is None:
        seed = [DEFAULT_SEED] if mode == "zero" else [(1,)]
    seed = list(seed)
    check_seed(seed, mode)
    history = []
    for k in range(start_k, max_k + 1):
        if mode == "zero":
            res = mod_preserve_precone(
                beta, seed, k, use_inner_reduction,
                strict=strict, conjugacy=conjugacy, ball_cap=ball_cap,
                max_nodes=max_nodes, threads=threads, metadata=metadata,
            )
        else:
            if any(len(w) > k for w in seed):
                continue
            res = preserve_precone(
                beta, seed, k, ball_cap=ball_cap, max_nodes=max_nodes, threads=threads, metadata=metadata
            )
        history.append(res)
        if on_result is not None:
            on_result(res)
        if not res.found:
            return DriverResult(True, k, res.certificate, history)
    return DriverResult(False, max_k, None, history)
