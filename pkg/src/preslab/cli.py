"""Command-line front end.

Exit codes: 0 success, 1 counterexample found / property violated,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Sequence

from . import corpus
from .analysis import (
    bounded_equiv,
    duality_check,
    is_existentially_closed_in,
    minimal_cores,
    pce_counterexample_at,
    pce_counterexample_search,
    psc_counterexample_search,
)
from .evaluator import evaluate
from .logic import GRAPH, Formula, LogicError, Theory, Vocabulary
from .normal_forms import classify_prefix, relativize, to_prenex
from .reports import render_report
from .substructures import SearchBudget, induced_substructure
from .syntax import ParseError, parse_formula, parse_structure, print_formula, print_structure

SEARCH_COMMANDS = ("psc-search", "pce-search", "duality-test", "equiv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep usage on stderr
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="preslab", description="Cores, covers and preservation-property searches on finite structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, search=False):
        sp.add_argument("--sentence", action="append", default=[], help="formula text or sentence family (e.g. has_k_cycle:3)")
        sp.add_argument("--theory", help="theory family, e.g. loop_contrast or psi_prefix:4")
        sp.add_argument("--structure", help="structure family (cycle:4) or FILE[#NAME]")
        sp.add_argument("--vocab", help="vocabulary, e.g. 'E/2,P/1,c0' ('' for none)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--timing", action="store_true", help="report elapsed time (output no longer reproducible)")
        if search:
            sp.add_argument("--k", default="3", help="core/cover bound, or 'finite'")
            sp.add_argument("--max-size", type=int, default=4)
            sp.add_argument("--max-seconds", type=float, default=None)
            sp.add_argument("--no-dedup", action="store_true", help="keep isomorphic copies")
            sp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    for name, help_ in [
        ("eval", "truth of a formula in a structure"),
        ("classify", "prefix class of a formula"),
        ("prenex", "prenex normal form"),
        ("relativize", "relativize a sentence to variables"),
        ("gen", "emit a generated structure, sentence or theory"),
        ("ec-check", "is a structure existentially closed in an extension"),
    ]:
        sp = sub.add_parser(name, help=help_)
        common(sp)
        if name == "eval":
            sp.add_argument("--assign", action="append", default=[], help="x=a")
        if name == "relativize":
            sp.add_argument("--vars", required=True, help="comma-separated fresh variables")
        if name == "ec-check":
            sp.add_argument("--extension", help="extension structure (family or FILE[#NAME])")
            sp.add_argument("--subset", help="comma-separated elements; the substructure is induced on them")
    for name in ("cores", "covers") + SEARCH_COMMANDS:
        sp = sub.add_parser(name)
        common(sp, search=True)
    return p


# ---------------------------------------------------------------------------
# Argument resolution


def parse_vocab(spec: str) -> Vocabulary:
    rels, consts = [], []
    for item in filter(None, (s.strip() for s in spec.split(","))):
        if "/" in item:
            r, _, a = item.partition("/")
            rels.append((r.strip(), int(a)))
        else:
            consts.append(item)
    return Vocabulary(tuple(rels), tuple(consts), name="sig")


def load_structure(spec: str):
    path, _, name = spec.partition("#")
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return parse_structure(fh.read(), name or None)
    fam, params = corpus.parse_family_spec(spec)
    return corpus.gen_structure(fam, *params)


_FAMILY_RE = re.compile(r"^[a-z_0-9]+(:[0-9,]+)?$")


def load_sentence(text: str, vocab: Vocabulary) -> Formula:
    if _FAMILY_RE.match(text.strip()):
        fam, params = corpus.parse_family_spec(text.strip())
        if fam in corpus.SENTENCE_FAMILIES:
            return corpus.gen_sentence(fam, *params)
    return parse_formula(text, vocab)


def _vocab_for(args, structure=None) -> Vocabulary | None:
    if args.vocab is not None:
        return parse_vocab(args.vocab)
    if structure is not None:
        return structure.vocab
    return None


def _sentences(args, vocab: Vocabulary | None) -> list[Formula]:
    return [load_sentence(t, vocab or GRAPH) for t in args.sentence]


def _theory(args, vocab: Vocabulary | None) -> Theory:
    if args.theory:
        fam, params = corpus.parse_family_spec(args.theory)
        return corpus.gen_theory(fam, *params)
    sents = _sentences(args, vocab)
    if not sents:
        raise UsageError("need --sentence or --theory")
    return Theory(tuple(sents))


def _one_sentence(args, vocab) -> Formula:
    sents = _sentences(args, vocab)
    if len(sents) != 1:
        raise UsageError("exactly one --sentence is required")
    return sents[0]


def _k(args, size: int) -> int:
    if args.k == "finite":
        return size
    try:
        k = int(args.k)
    except ValueError:
        raise UsageError(f"--k must be an integer or 'finite', got {args.k!r}") from None
    if k < 0:
        raise UsageError("--k must be non-negative")
    return k


def _budget(args) -> SearchBudget:
    if args.max_size < 1:
        raise UsageError("--max-size must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    return SearchBudget(args.max_size, args.max_seconds, not args.no_dedup)


def _need_structure(args):
    if not args.structure:
        raise UsageError("--structure is required")
    return load_structure(args.structure)


def _emit(obj, args) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        for k, v in obj.items():
            sys.stdout.write(f"{k}: {v}\n")


# ---------------------------------------------------------------------------


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "eval":
        m = _need_structure(args)
        f = _one_sentence(args, _vocab_for(args, m))
        asg = dict(a.split("=", 1) for a in args.assign)
        _emit({"query": "eval", "structure": m.name, "formula": print_formula(f), "value": evaluate(m, f, asg)}, args)
        return 0
    if cmd in ("classify", "prenex"):
        f = _one_sentence(args, _vocab_for(args))
        pf = to_prenex(f)
        cls = classify_prefix(pf)
        _emit({
            "query": cmd,
            "formula": print_formula(f),
            "prenex": print_formula(pf.to_formula()),
            "polarity": cls.polarity,
            "n": cls.n,
            "leading_count": cls.leading_count,
        }, args)
        return 0
    if cmd == "relativize":
        vocab = _vocab_for(args)
        f = _one_sentence(args, vocab)
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
        _emit({"query": "relativize", "formula": print_formula(f), "vars": names,
               "result": print_formula(relativize(f, names, vocab))}, args)
        return 0
    if cmd == "gen":
        return _gen(args)
    if cmd == "ec-check":
        return _ec(args)
    if cmd == "cores":
        m = _need_structure(args)
        theory = _theory(args, _vocab_for(args, m))
        rep = minimal_cores(m, theory, _k(args, len(m)))
        sys.stdout.write(render_report(rep, args.format, args.timing))
        return 1 if rep.is_psc_witness_failure else 0
    if cmd == "covers":
        m = _need_structure(args)
        f = _one_sentence(args, _vocab_for(args, m))
        rep = pce_counterexample_at(f, _k(args, len(m)), m)
        sys.stdout.write(render_report(rep, args.format, args.timing))
        return 1 if rep.found else 0
    budget = _budget(args)
    vocab = _vocab_for(args)
    k = _k(args, budget.max_universe_size)
    if cmd == "psc-search":
        target = _theory(args, vocab)
        target = target.sentences[0] if len(target) == 1 and not args.theory else target
        rep = psc_counterexample_search(target, k, budget, vocab, jobs=args.jobs)
    elif cmd == "pce-search":
        rep = pce_counterexample_search(_one_sentence(args, vocab), k, budget, vocab, jobs=args.jobs)
    elif cmd == "duality-test":
        rep = duality_check(_one_sentence(args, vocab), k, budget, vocab, jobs=args.jobs)
    else:
        sents = _sentences(args, vocab)
        if len(sents) != 2:
            raise UsageError("equiv needs exactly two --sentence arguments")
        rep = bounded_equiv(sents[0], sents[1], budget, vocab, jobs=args.jobs)
    sys.stdout.write(render_report(rep, args.format, args.timing))
    return 1 if rep.found else 0


def _gen(args) -> int:
    if args.structure:
        sys.stdout.write(print_structure(load_structure(args.structure)) + "\n")
    elif args.theory:
        fam, params = corpus.parse_family_spec(args.theory)
        for s in corpus.gen_theory(fam, *params):
            sys.stdout.write(print_formula(s) + "\n")
    elif args.sentence:
        for t in args.sentence:
            fam, params = corpus.parse_family_spec(t)
            sys.stdout.write(print_formula(corpus.gen_sentence(fam, *params)) + "\n")
    else:
        raise UsageError("gen needs --structure, --sentence or --theory")
    return 0


def _ec(args) -> int:
    if args.subset is not None:
        r = _need_structure(args)
        m = induced_substructure(r, [e.strip() for e in args.subset.split(",") if e.strip()])
    else:
        if not args.extension:
            raise UsageError("ec-check needs --extension or --subset")
        m = _need_structure(args)
        r = load_structure(args.extension)
    ok = is_existentially_closed_in(m, r)
    _emit({"query": "ec-check", "structure": list(m.universe), "extension": r.name, "existentially_closed": ok}, args)
    return 0 if ok else 1


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except UsageError as exc:
        print(f"preslab: error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, LogicError, ValueError, OSError) as exc:
        print(f"preslab: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
