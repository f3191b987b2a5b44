"""Command-line front end.

Exit status is 0 on success, 1 when the input is well formed but fails (a
rule violation, a sub-formula violation, no parse, fuel exhausted) and 2 on
usage, I/O or syntax errors.
"""
from __future__ import annotations

import argparse
import sys

from .formula import FormulaSyntaxError, parse_formula
from .grammar import GrammarError, Lexicon, derive, expand, format_derivation
from .normalize import check_subformula_property, format_path, format_trace, run
from .proof import Proof, ProofSyntaxError, Rule, RuleViolation, check, format_proof, parse_proof, walk
from .render import render


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == '-':
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f'{path}: {e.strerror}') from None


def _load_proof(path: str) -> Proof:
    try:
        return parse_proof(_read(path))
    except ProofSyntaxError as e:
        raise UsageError(f'{path}: {e}') from None


def _load_lexicon(path: str | None) -> Lexicon | None:
    if path is None:
        return None
    try:
        return Lexicon.parse(_read(path))
    except GrammarError as e:
        raise UsageError(f'{path}: {e}') from None


def _axioms(p: Proof, lexicon: Lexicon | None) -> dict:
    """Proper axioms come from the lexicon, or are taken as declared in the proof."""
    if lexicon is not None:
        return lexicon.axioms()
    table: dict[str, list] = {}
    for _, n in walk(p):
        if n.rule is Rule.ProperAxiom:
            table.setdefault(n.name, []).append(n.conclusion)
    return table


def _violation(e: RuleViolation) -> str:
    return f'violation at {format_path(e.path)}: {e.rule.value}: {e.reason}: {e.detail}'


def cmd_check(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    axioms = lexicon.axioms() if lexicon else None
    status = 0
    for path in args.files:
        prefix = f'{path}: ' if len(args.files) > 1 else ''
        try:
            check(_load_proof(path), axioms)
        except RuleViolation as e:
            print(prefix + _violation(e))
            status = 1
        else:
            print(prefix + 'OK')
    return status


def _checked(args) -> Proof | None:
    p = _load_proof(args.file)
    try:
        check(p, _axioms(p, _load_lexicon(args.lexicon)))
    except RuleViolation as e:
        print(_violation(e))
        return None
    return p


def cmd_normalize(args) -> int:
    p = _checked(args)
    if p is None:
        return 1
    try:
        result = run(p, args.mode, args.fuel)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.trace:
        print(format_trace(p, result, args.mode))
    print(format_proof(result.proof))
    if not result.complete:
        print(f'fuel exhausted after {len(result.steps)} steps', file=sys.stderr)
        return 1
    return 0


def cmd_subformula(args) -> int:
    p = _checked(args)
    if p is None:
        return 1
    violations = check_subformula_property(p)
    if not violations:
        print('OK')
        return 0
    for v in violations:
        print(f'{format_path(v.path)}: {v.formula}')
    return 1


def cmd_derive(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    try:
        goal = parse_formula(args.goal)
    except FormulaSyntaxError as e:
        raise UsageError(f'goal: {e}') from None
    found = derive(lexicon, args.sentence.split(), goal, args.bound)
    if not found:
        print('no parse')
        return 1
    if args.limit is not None:
        found = found[:args.limit]
    blocks = [format_proof(expand(d)) if args.expand else format_derivation(d) for d in found]
    print('\n\n'.join(blocks))
    return 0


def cmd_render(args) -> int:
    p = _checked(args)
    if p is None:
        return 1
    print(render(p, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='pcmll', description='Proof checker and normalizer for PCMLL.')
    sub = parser.add_subparsers(dest='command', required=True)

    def proof_command(name: str, help: str):
        p = sub.add_parser(name, help=help)
        p.add_argument('file', help="proof file, or '-' for standard input")
        p.add_argument('--lexicon', help='word<TAB>type file admitting proper axioms')
        return p

    p = sub.add_parser('check', help='check every rule of one or more proofs')
    p.add_argument('files', nargs='+', metavar='file', help="proof file, or '-' for standard input")
    p.add_argument('--lexicon', help='word<TAB>type file admitting proper axioms')
    p.set_defaults(func=cmd_check)

    p = proof_command('normalize', 'print the normal form of a proof')
    p.add_argument('--mode', choices=('lambek', 'pcmll'), default='pcmll')
    p.add_argument('--trace', action='store_true', help='print one line per rewrite step')
    p.add_argument('--fuel', type=int, help='step limit (default 10 n^2, or PCMLL_FUEL)')
    p.set_defaults(func=cmd_normalize)

    p = proof_command('subformula', 'check the sub-formula property')
    p.set_defaults(func=cmd_subformula)

    p = proof_command('render', 'print a proof tree')
    p.add_argument('--format', choices=('text', 'latex'), default='text')
    p.set_defaults(func=cmd_render)

    p = sub.add_parser('derive', help='derive a sentence from a lexicon')
    p.add_argument('lexicon')
    p.add_argument('sentence', help='space-separated words')
    p.add_argument('goal', help='goal formula')
    p.add_argument('--bound', type=int, default=12, help='maximum number of merge and move steps')
    p.add_argument('--limit', type=int, help='print at most this many derivations')
    p.add_argument('--expand', action='store_true', help='print kernel proofs instead of derived rules')
    p.set_defaults(func=cmd_derive)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
