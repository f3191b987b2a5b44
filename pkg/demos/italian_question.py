"""Derive "che cosa fai" with merge and move, then check the kernel proof.

Run from the repository root: python demos/italian_question.py
"""
from pathlib import Path

from pcmll import Lexicon, check, derive, expand, parse_formula, render
from pcmll.grammar import format_derivation

LEXICON = Path(__file__).parent.parent / 'lexicon' / 'italian.lex'


def main():
    lexicon = Lexicon.load(LEXICON)
    found = derive(lexicon, 'che cosa fai'.split(), parse_formula('c'), 12)
    print(f'{len(found)} derivations of "che cosa fai" as c')
    d = found[0]
    print(format_derivation(d))
    print(f"{d.count('merge')} merges, {d.count('move')} moves")

    p = expand(d)
    check(p, lexicon.axioms())
    print(f'the expansion is a kernel proof with {len(p)} rules:')
    print(render(p))


if __name__ == '__main__':
    main()
