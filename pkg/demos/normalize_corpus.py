"""Normalize the example proofs and show each rewrite step with its measure.

Run from the repository root: python demos/normalize_corpus.py
"""
from pathlib import Path

from pcmll import check_subformula_property, format_proof, parse_proof, run
from pcmll.normalize import format_path, format_trace

CORPUS = Path(__file__).parent.parent / 'corpus'
CASES = [('lambek_detour', 'lambek'), ('lambek_low_product', 'lambek'),
         ('pcmll_detour', 'pcmll'), ('pcmll_product_chain', 'pcmll')]


def main():
    for name, mode in CASES:
        p = parse_proof((CORPUS / f'{name}.proof').read_text())
        result = run(p, mode)
        print(f'== {name} ({mode} mode)')
        print(format_proof(p))
        print(format_trace(p, result, mode))
        print(format_proof(result.proof))
        leftover = check_subformula_property(result.proof)
        if leftover:
            # a redex over a proper axiom cannot be contracted, so its formula stays
            where = ', '.join(f'{v.formula} at {format_path(v.path)}' for v in leftover)
            print(f'stuck redex keeps {where}')
        print()


if __name__ == '__main__':
    main()
