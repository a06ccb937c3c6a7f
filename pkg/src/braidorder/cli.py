"""``braidorder`` command line.

Exit codes: 0 success (or a proven obstruction), 1 inconclusive search or a
failing certificate, 2 usage or parse errors, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Callable, Sequence

from .braidact import BraidWord, FreeAutomorphism, apply, braid_to_auto, parse_braid
from .freegroup import DEFAULT_BALL_CAP, BallTooLarge, IDENTITY, Word, WordError, conj, format_word, inv, mul, parse_word, power

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

log = logging.getLogger("braidorder")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _braid(text: str, strands: int | None) -> BraidWord:
    b = parse_braid(text, strands)
    if b.strands < 2:
        raise WordError("a braid needs at least 2 strands")
    return b


# ---------------------------------------------------------------------------
# obstruct

def cmd_obstruct(args) -> int:
    from .certificate import save
    from .search import SearchLimit, obstruct

    beta = _braid(args.braid, args.strands)
    seed = parse_word(args.seed, beta.strands)
    mode = "zero" if args.mode == "zero" else "all"
    metadata = {
        "max_k": args.max_k,
        "mode": args.mode,
        "inner_reduction": not args.no_inner_reduction,
        "strict_paper_mode": args.strict_paper_mode,
        "conjugacy": not args.no_conjugacy,
        "seed": args.seed,
        "ball_cap": args.ball_cap,
    }

    def progress(res):
        log.info("k=%d %s nodes=%d max_cone=%d %.1fms", res.k, res.verdict, res.stats.nodes,
                 res.stats.max_cone_size, res.stats.wall_ms)

    try:
        result = obstruct(
            beta, args.max_k,
            mode=mode,
            use_inner_reduction=not args.no_inner_reduction,
            strict=args.strict_paper_mode,
            conjugacy=not args.no_conjugacy,
            seed=[seed],
            ball_cap=args.ball_cap,
            max_nodes=args.max_nodes,
            threads=args.threads,
            on_result=progress,
            metadata=metadata,
        )
    except SearchLimit as exc:
        _emit({"verdict": "ResourceLimit", "k": exc.k, "error": str(exc)})
        return EXIT_LIMIT
    last = result.history[-1] if result.history else None
    report = {
        "verdict": result.outcome,
        "k": result.k,
        "nodes": last.stats.nodes if last else 0,
        "max_cone_size": last.stats.max_cone_size if last else 0,
        "wall_ms": round(sum(r.stats.wall_ms for r in result.history), 3),
    }
    if result.proven and args.emit_proof:
        save(result.certificate, args.emit_proof)
        report["certificate"] = args.emit_proof
    _emit(report)
    return EXIT_OK if result.proven else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    from .certificate import MalformedCertificate, VerificationFailure, check, load, render_human

    try:
        cert = load(args.path)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedCertificate as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        check(cert)
    except VerificationFailure as exc:
        print(f"FAIL {exc.path}: {exc}")
        return EXIT_NEGATIVE
    print("OK")
    if args.explain:
        print(render_human(cert))
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args) -> int:
    from .oracle import OracleTooLarge, enumerate_cones, enumerate_preserved

    mode = "zero" if args.mode == "zero" else "all"
    try:
        if args.braid is None:
            census = enumerate_cones(args.strands or 3, args.k, mode, cap=args.cap)
        else:
            beta = _braid(args.braid, args.strands)
            require = parse_word(args.require, beta.strands) if args.require else None
            census = enumerate_preserved(beta, args.k, mode, require, cap=args.cap)
    except (OracleTooLarge, BallTooLarge) as exc:
        _emit({"error": str(exc)})
        return EXIT_LIMIT
    print(census.dumps(include_witnesses=args.witnesses))
    return EXIT_OK


# ---------------------------------------------------------------------------
# family

def cmd_family(args) -> int:
    from .family import family_auto, replay_family_proof

    res = replay_family_proof(args.m)
    out = {"m": args.m, "ok": res.ok, "failed": res.failed}
    if args.images:
        out["images"] = [format_word(w) for w in family_auto(args.m).f.images]
    _emit(out)
    return EXIT_OK if res.ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# calc

class CalcError(ValueError):
    pass


_CALC_TOKEN = re.compile(r"\s*(?:(x\d+)|(-?\d+)|(inv|act|f)\b|(\[[^\]]*\])|([()^*]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, i = [], 0
    text = text.rstrip()
    while i < len(text):
        m = _CALC_TOKEN.match(text, i)
        if not m:
            raise CalcError(f"unexpected input at {text[i:]!r}")
        kinds = ("gen", "int", "fn", "bracket", "op")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                out.append((kind, val))
        i = m.end()
    return out


class _Calc:
    """Recursive descent over the expression grammar.

    expr   := term ('*'? term)*
    term   := atom ('^' (int | atom))*
    atom   := x<i> | 1 | '(' expr ')' | inv(expr) | act[braid](expr) | f[m](expr)

    ``g^h`` with a word ``h`` is ``h g h^-1``; ``g^e`` with an integer is a power.
    """

    def __init__(self, tokens: list[tuple[str, str]], rank: int | None):
        self.toks, self.i, self.rank = tokens, 0, rank

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str | None = None, val: str | None = None) -> tuple[str, str]:
        t = self.peek()
        if t is None or (kind and t[0] != kind) or (val and t[1] != val):
            want = val or kind or "token"
            raise CalcError(f"expected {want}, got {t[1] if t else 'end of input'!r}")
        self.i += 1
        return t

    def parse(self) -> Word:
        w = self.expr()
        if self.peek() is not None:
            raise CalcError(f"unexpected {self.peek()[1]!r}")
        return w

    def expr(self) -> Word:
        w = self.term()
        while True:
            t = self.peek()
            if t is None or t[1] == ")" or t[1] == "^":
                return w
            if t[1] == "*":
                self.take()
            w = mul(w, self.term())

    def term(self) -> Word:
        w = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            t = self.peek()
            if t is not None and t[0] == "int":
                w = power(w, int(self.take()[1]))
            else:
                w = conj(w, self.atom())
        return w

    def _action(self, make: Callable[[str], FreeAutomorphism]) -> Word:
        arg = self.take("bracket")[1][1:-1]
        self.take("op", "(")
        w = self.expr()
        self.take("op", ")")
        return apply(make(arg), w)

    def atom(self) -> Word:
        kind, val = self.take()
        if kind == "gen":
            i = int(val[1:])
            if i < 1 or (self.rank is not None and i > self.rank):
                raise CalcError(f"generator {val} out of range")
            return (i,)
        if kind == "int":
            if val != "1":
                raise CalcError(f"bare integer {val!r}; only 1 denotes the identity")
            return IDENTITY
        if val == "(":
            w = self.expr()
            self.take("op", ")")
            return w
        if val == "inv":
            self.take("op", "(")
            w = self.expr()
            self.take("op", ")")
            return inv(w)
        if val == "act":
            return self._action(lambda s: braid_to_auto(parse_braid(s, self.rank)))
        if val == "f":
            from .family import family_auto

            return self._action(lambda s: family_auto(int(s)).f)
        raise CalcError(f"unexpected {val!r}")


def evaluate(text: str, rank: int | None = None) -> Word:
    """Evaluate a word expression such as ``(x1^-1 x2)^(x3)`` or ``act[s1](x1 x2)``."""
    return _Calc(_tokenize(text), rank).parse()


def cmd_calc(args) -> int:
    print(format_word(evaluate(args.expression, args.strands)))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="braidorder", description="Search for obstructions to braids preserving bi-orders of free groups.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = sub.add_parser("obstruct", help="try to prove a braid is not order-preserving")
    o.add_argument("braid", help='braid word such as "s1 s2^-3"')
    o.add_argument("--max-k", type=int, default=8)
    o.add_argument("--mode", choices=("pre", "zero"), default="zero",
                   help="search all words (pre) or only exponent-sum-zero words (zero)")
    o.add_argument("--no-inner-reduction", action="store_true")
    o.add_argument("--strict-paper-mode", action="store_true",
                   help="only an inverse pair inside the ball counts as a contradiction")
    o.add_argument("--no-conjugacy", action="store_true",
                   help="do not match inverse conjugacy classes when detecting contradictions")
    o.add_argument("--seed", default="x1^-1 x2", help="word assumed positive")
    o.add_argument("--emit-proof", metavar="PATH")
    o.add_argument("--strands", type=int)
    o.add_argument("--threads", type=int, default=1)
    o.add_argument("--ball-cap", type=int, default=DEFAULT_BALL_CAP)
    o.add_argument("--max-nodes", type=int)
    o.set_defaults(func=cmd_obstruct)

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("path")
    v.add_argument("--explain", action="store_true", help="print the proof in prose")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("oracle", help="count cones of a small ball by exhaustive search")
    r.add_argument("braid", nargs="?")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--mode", choices=("pre", "zero"), default="zero")
    r.add_argument("--strands", type=int)
    r.add_argument("--require", help="only cones containing this word")
    r.add_argument("--witnesses", action="store_true")
    r.add_argument("--cap", type=int, default=24, help="maximum number of inverse pairs")
    r.set_defaults(func=cmd_oracle)

    f = sub.add_parser("family", help="replay the argument for s1 s2^(2m+1)")
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--images", action="store_true")
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("calc", help="evaluate a free group expression")
    c.add_argument("expression")
    c.add_argument("--strands", type=int)
    c.set_defaults(func=cmd_calc)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(message)s", stream=sys.stderr)
    for name in ("max_k", "threads", "ball_cap", "k"):
        val = getattr(args, name, None)
        if val is not None and val < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    try:
        return args.func(args)
    except (WordError, CalcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
