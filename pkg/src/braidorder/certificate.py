"""Proof trees showing that a braid preserves no positive cone, and their checker.

A certificate is a binary tree.  Each internal node splits on a word ``alpha``
(any cone contains ``alpha`` or ``alpha^-1``); each leaf exhibits a word and
its inverse, both derived from the seed and the assumptions on the path by
explicit steps.  :func:`verify` replays every step using only free-group
arithmetic and the braid action, so it can be trusted without the search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Union

from .braidact import BraidWord, apply, braid_to_auto, compose, format_braid, inner, invert_braid
from .freegroup import IDENTITY, Word, conj, exp_sum, format_word, inv, mul

FORMAT_VERSION = 1
CHAIN_RULES = ("seed", "branch", "product", "conj_gen", "forward", "inverse")


@dataclass(frozen=True)
class Step:
    rule: str
    args: tuple[Word, ...]
    result: Word


@dataclass(frozen=True)
class Leaf:
    witness: Word
    chain_witness: tuple[Step, ...]
    chain_inverse: tuple[Step, ...]


@dataclass(frozen=True)
class Branch:
    alpha: Word
    with_alpha: ProofNode
    with_alpha_inverse: ProofNode


ProofNode = Union[Branch, Leaf]


@dataclass(frozen=True)
class Certificate:
    braid: BraidWord
    k: int
    seed: tuple[Word, ...]
    inner_conjugators: tuple[Word, Word]
    root: ProofNode
    mode: str = "zero"
    strict: bool = False
    metadata: tuple[tuple[str, Any], ...] = ()

    def leaves(self) -> list[Leaf]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                out.append(node)
            else:
                stack.extend([node.with_alpha_inverse, node.with_alpha])
        return out

    def depth(self) -> int:
        def d(node):
            return 0 if isinstance(node, Leaf) else 1 + max(d(node.with_alpha), d(node.with_alpha_inverse))
        return d(self.root)


# ---------------------------------------------------------------------------
# extraction

def derivation_chain(target: Word, derivations: Mapping) -> tuple[Step, ...]:
    """Every step needed to derive ``target``, parents before children.

    ``derivations`` maps words to objects with ``rule`` and ``args``.
    """
    steps: list[Step] = []
    done: set[Word] = set()
    stack: list[tuple[Word, bool]] = [(target, False)]
    while stack:
        w, expanded = stack.pop()
        if w in done:
            continue
        d = derivations[w]
        parents = [] if d.rule in ("seed", "branch") else list(d.args)
        if d.rule == "conj_gen":
            parents = [d.args[1]]
        if expanded or not parents:
            done.add(w)
            steps.append(Step(d.rule, tuple(d.args), w))
            continue
        stack.append((w, True))
        for p in reversed(parents):
            if p not in done:
                stack.append((p, False))
    return tuple(steps)


def build_leaf(contradiction) -> Leaf:
    """Turn a contradiction found by the search into a replayable leaf."""
    w = contradiction.witness
    derivs = contradiction.derivations
    if contradiction.via is None:
        return Leaf(w, derivation_chain(w, derivs), derivation_chain(inv(w), derivs))
    v, h = contradiction.via
    # h v h^-1 one generator at a time, innermost letter first
    steps = list(derivation_chain(v, derivs))
    cur = v
    for a in reversed(h):
        nxt = conj(cur, (a,))
        steps.append(Step("conj_gen", ((a,), cur), nxt))
        cur = nxt
    return Leaf(w, derivation_chain(w, derivs), tuple(steps))


# ---------------------------------------------------------------------------
# JSON

def _word_json(w: Word) -> list[int]:
    return list(w)


def _step_json(s: Step) -> dict:
    return {"rule": s.rule, "args": [_word_json(a) for a in s.args], "result": _word_json(s.result)}


def _node_json(node: ProofNode) -> dict:
    if isinstance(node, Leaf):
        return {
            "type": "contradiction",
            "witness": _word_json(node.witness),
            "chain_witness": [_step_json(s) for s in node.chain_witness],
            "chain_inverse": [_step_json(s) for s in node.chain_inverse],
        }
    return {
        "type": "branch",
        "alpha": _word_json(node.alpha),
        "with_alpha": _node_json(node.with_alpha),
        "with_alpha_inverse": _node_json(node.with_alpha_inverse),
    }


def to_json(c: Certificate) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "braid": list(c.braid.letters),
        "strands": c.braid.strands,
        "k": c.k,
        "seed": [_word_json(w) for w in c.seed],
        "inner_conjugators": [_word_json(w) for w in c.inner_conjugators],
        "mode": c.mode,
        "strict": c.strict,
        "metadata": dict(c.metadata),
        "tree": _node_json(c.root),
    }


def dumps(c: Certificate) -> str:
    # one fixed layout so identical runs give byte-identical files
    return json.dumps(to_json(c), sort_keys=True, separators=(",", ":")) + "\n"


def save(c: Certificate, path: str | Path) -> None:
    Path(path).write_text(dumps(c), encoding="utf-8")


class MalformedCertificate(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _word(x: Any, where: str) -> Word:
    if not isinstance(x, list) or not all(isinstance(a, int) and not isinstance(a, bool) and a != 0 for a in x):
        raise MalformedCertificate(where, f"expected a list of nonzero integers, got {x!r}")
    return tuple(x)


def _field(d: Any, key: str, where: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise MalformedCertificate(where, f"missing field {key!r}")
    return d[key]


def _steps(raw: Any, where: str) -> tuple[Step, ...]:
    if not isinstance(raw, list):
        raise MalformedCertificate(where, "chain must be a list")
    out = []
    for i, s in enumerate(raw):
        w = f"{where}[{i}]"
        rule = _field(s, "rule", w)
        args = _field(s, "args", w)
        if not isinstance(args, list):
            raise MalformedCertificate(w, "args must be a list")
        out.append(Step(rule, tuple(_word(a, f"{w}.args") for a in args), _word(_field(s, "result", w), f"{w}.result")))
    return tuple(out)


def _node(raw: Any, where: str) -> ProofNode:
    kind = _field(raw, "type", where)
    if kind == "branch":
        return Branch(
            _word(_field(raw, "alpha", where), f"{where}.alpha"),
            _node(_field(raw, "with_alpha", where), f"{where}/alpha"),
            _node(_field(raw, "with_alpha_inverse", where), f"{where}/alpha^-1"),
        )
    if kind == "contradiction":
        return Leaf(
            _word(_field(raw, "witness", where), f"{where}.witness"),
            _steps(_field(raw, "chain_witness", where), f"{where}.chain_witness"),
            _steps(_field(raw, "chain_inverse", where), f"{where}.chain_inverse"),
        )
    raise MalformedCertificate(where, f"unknown node type {kind!r}")


def from_json(data: Any) -> Certificate:
    if _field(data, "format_version", "root") != FORMAT_VERSION:
        raise MalformedCertificate("root", f"unsupported format_version {data['format_version']!r}")
    strands = _field(data, "strands", "root")
    k = _field(data, "k", "root")
    if not isinstance(strands, int) or not isinstance(k, int):
        raise MalformedCertificate("root", "strands and k must be integers")
    try:
        braid = BraidWord(strands, _word(_field(data, "braid", "root"), "braid"))
    except ValueError as exc:
        raise MalformedCertificate("braid", str(exc)) from None
    seed_raw = _field(data, "seed", "root")
    if not isinstance(seed_raw, list):
        raise MalformedCertificate("seed", "seed must be a list")
    conj_raw = _field(data, "inner_conjugators", "root")
    if not isinstance(conj_raw, list) or len(conj_raw) != 2:
        raise MalformedCertificate("inner_conjugators", "expected two words")
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise MalformedCertificate("metadata", "metadata must be an object")
    return Certificate(
        braid=braid,
        k=k,
        seed=tuple(_word(w, "seed") for w in seed_raw),
        inner_conjugators=(_word(conj_raw[0], "inner_conjugators"), _word(conj_raw[1], "inner_conjugators")),
        root=_node(_field(data, "tree", "root"), "tree"),
        mode=data.get("mode", "zero"),
        strict=bool(data.get("strict", False)),
        metadata=tuple(sorted(meta.items())),
    )


def loads(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate("root", f"invalid JSON: {exc}") from None
    return from_json(data)


def load(path: str | Path) -> Certificate:
    return loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# verification

class VerificationFailure(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _is_reduced(w: Word, n: int) -> bool:
    return all(a != 0 and abs(a) <= n for a in w) and all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def _check_seed(seed: tuple[Word, ...], mode: str) -> None:
    # one nontrivial word may be assumed positive: otherwise the opposite cone
    # is preserved too and contains it
    if len(seed) != 1 or not seed[0]:
        raise VerificationFailure("seed", "expected exactly one nontrivial seed word")
    if mode == "zero" and exp_sum(seed[0]) != 0:
        raise VerificationFailure("seed", "zero-sum certificates need a seed of exponent sum zero")


def _replay_chain(chain, assumed: set[Word], fwd, bwd, n: int, where: str) -> Word:
    if not chain:
        raise VerificationFailure(where, "empty chain")
    known: set[Word] = set()
    for i, s in enumerate(chain):
        w = f"{where}[{i}]"
        if not _is_reduced(s.result, n):
            raise VerificationFailure(w, f"result {list(s.result)} is not a reduced word in F_{n}")
        for a in s.args:
            if not _is_reduced(a, n):
                raise VerificationFailure(w, f"argument {list(a)} is not a reduced word in F_{n}")
        if s.rule in ("seed", "branch"):
            if s.args:
                raise VerificationFailure(w, f"{s.rule} step takes no arguments")
            if s.result not in assumed:
                raise VerificationFailure(w, f"{format_word(s.result)} is not assumed on this path")
            got = s.result
        elif s.rule == "product":
            if len(s.args) != 2:
                raise VerificationFailure(w, "product needs two arguments")
            parents = s.args
            got = mul(*s.args)
        elif s.rule == "conj_gen":
            if len(s.args) != 2 or len(s.args[0]) != 1:
                raise VerificationFailure(w, "conj_gen needs a single generator and a word")
            parents = s.args[1:]
            got = conj(s.args[1], s.args[0])
        elif s.rule in ("forward", "inverse"):
            if len(s.args) != 1:
                raise VerificationFailure(w, f"{s.rule} needs one argument")
            parents = s.args
            got = apply(fwd if s.rule == "forward" else bwd, s.args[0])
        else:
            raise VerificationFailure(w, f"unknown rule {s.rule!r}")
        if s.rule not in ("seed", "branch"):
            for p in parents:
                if p not in known and p not in assumed:
                    raise VerificationFailure(w, f"argument {format_word(p)} is not yet derived")
        if got != s.result:
            raise VerificationFailure(w, f"{s.rule} gives {format_word(got)}, not {format_word(s.result)}")
        known.add(got)
    return chain[-1].result


def check(c: Certificate) -> None:
    """Raise :class:`VerificationFailure` naming the first failing node."""
    n = c.braid.strands
    for i, w in enumerate(c.seed):
        if not _is_reduced(w, n):
            raise VerificationFailure(f"seed[{i}]", "not a reduced word")
    if c.mode not in ("all", "zero"):
        raise VerificationFailure("mode", f"unknown mode {c.mode!r}")
    if not isinstance(c.k, int) or c.k < 1:
        raise VerificationFailure("k", "k must be a positive integer")
    _check_seed(c.seed, c.mode)
    for w in c.inner_conjugators:
        if not _is_reduced(w, n):
            raise VerificationFailure("inner_conjugators", "not a reduced word")
    fwd = compose(inner(c.inner_conjugators[0], n), braid_to_auto(c.braid))
    bwd = compose(inner(c.inner_conjugators[1], n), braid_to_auto(invert_braid(c.braid)))
    stack = [(c.root, "tree", frozenset(c.seed))]
    while stack:
        node, where, assumed = stack.pop()
        if isinstance(node, Branch):
            if not node.alpha or not _is_reduced(node.alpha, n):
                raise VerificationFailure(where, "branch word must be a nontrivial reduced word")
            if len(node.alpha) > c.k or (c.mode == "zero" and exp_sum(node.alpha) != 0):
                raise VerificationFailure(where, "branch word lies outside the ball")
            stack.append((node.with_alpha_inverse, where + "/alpha^-1", assumed | {inv(node.alpha)}))
            stack.append((node.with_alpha, where + "/alpha", assumed | {node.alpha}))
            continue
        if not isinstance(node, Leaf):
            raise VerificationFailure(where, "unknown node")
        got = _replay_chain(node.chain_witness, set(assumed), fwd, bwd, n, where + ".chain_witness")
        if got != node.witness:
            raise VerificationFailure(where, "witness chain does not end at the witness")
        other = _replay_chain(node.chain_inverse, set(assumed), fwd, bwd, n, where + ".chain_inverse")
        if mul(node.witness, other) != IDENTITY:
            raise VerificationFailure(where, "the two chains do not derive mutually inverse words")


def verify(c: Certificate) -> bool:
    try:
        check(c)
    except VerificationFailure:
        return False
    return True


# ---------------------------------------------------------------------------
# prose

def _expr(w: Word, chain: tuple[Step, ...], names: dict[Word, str]) -> str:
    by_result = {s.result: s for s in chain}
    memo: dict[Word, str] = {}

    def go(x: Word, top: bool = False) -> str:
        if x in names:
            return names[x]
        if x in memo:
            return memo[x]
        s = by_result.get(x)
        if s is None or s.rule in ("seed", "branch"):
            out = f"({format_word(x)})"
        elif s.rule == "product":
            out = f"{go(s.args[0])} * {go(s.args[1])}"
            if not top:
                out = f"({out})"
        elif s.rule == "conj_gen":
            # fold runs of single-letter conjugations into one conjugator
            h, base = s.args[0], s.args[1]
            while base not in names and base in by_result and by_result[base].rule == "conj_gen":
                inner_step = by_result[base]
                h, base = mul(h, inner_step.args[0]), inner_step.args[1]
            out = f"{go(base)}^({format_word(h)})"
        elif s.rule == "forward":
            out = f"b({go(s.args[0], True)})"
        else:
            out = f"b'({go(s.args[0], True)})"
        memo[x] = out
        return out

    return go(w, True)


def render_human(c: Certificate) -> str:
    """A written proof that the braid preserves no positive cone.

    Conjugation is written ``g^(h)`` for ``h g h^-1``; ``b`` and ``b'`` are the
    braid action and its inverse, each followed by conjugation by the recorded
    inner conjugator.
    """
    lines = []
    c1, c2 = c.inner_conjugators
    lines.append(f"Claim: the braid {format_braid(c.braid)} on {c.braid.strands} strands is not order-preserving.")
    lines.append("")
    lines.append(
        f"Let b = (conjugation by {format_word(c1)}) o beta and b' = (conjugation by {format_word(c2)}) o beta^-1. "
        "Both preserve every positive cone preserved by beta, because positive cones are conjugation invariant."
    )
    names = {}
    if len(c.seed) == 1:
        names[c.seed[0]] = "y"
        lines.append(f"Suppose P is a positive cone preserved by beta. We may assume y = {format_word(c.seed[0])} lies in P.")
    else:
        lines.append(
            "Suppose P is a positive cone preserved by beta. We may assume P contains "
            + ", ".join(format_word(w) for w in c.seed) + "."
        )

    def walk(node: ProofNode, depth: int, label: str, names: dict[Word, str]) -> None:
        pad = "  " * depth
        if isinstance(node, Leaf):
            w = node.witness
            lines.append(f"{pad}Case {label}: contradiction for mu = {format_word(w)}.")
            lines.append(f"{pad}  mu = {_expr(w, node.chain_witness, names)} = {format_word(w)}")
            lines.append(f"{pad}  mu^-1 = {_expr(inv(w), node.chain_inverse, names)} = {format_word(inv(w))}")
            lines.append(f"{pad}  Both mu and mu^-1 lie in P, which is impossible.")
            return
        a = f"a{depth + 1}"
        lines.append(f"{pad}Let {a} = {format_word(node.alpha)}. Either {a} or {a}^-1 lies in P.")
        left = dict(names)
        left[node.alpha] = a
        walk(node.with_alpha, depth + 1, f"{label}.1" if label else "1", left)
        right = dict(names)
        right[inv(node.alpha)] = f"{a}^-1"
        walk(node.with_alpha_inverse, depth + 1, f"{label}.2" if label else "2", right)

    lines.append("")
    walk(c.root, 0, "", names)
    lines.append("")
    lines.append("Every case is contradictory, so no such P exists.")
    return "\n".join(lines) + "\n"
