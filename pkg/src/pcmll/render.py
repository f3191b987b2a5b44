"""Proof trees as indented text or as LaTeX in the bussproofs style."""
from __future__ import annotations

from .context import Context, Empty, Hole, Leaf, Par, Seq
from .formula import Formula, format_formula
from .proof import Proof, Rule, format_sequent

_TEXT_RULES = {Rule.Axiom: 'ax', Rule.ProperAxiom: 'lex'}

_LATEX_RULES = {
    Rule.Axiom: r'\mathit{ax}',
    Rule.LtoE: r'\backslash_e', Rule.LfromE: r'/_e', Rule.LltoE: r'\multimap_e',
    Rule.LtoI: r'\backslash_i', Rule.LfromI: r'/_i', Rule.LltoI: r'\multimap_i',
    Rule.OdotI: r'\odot_i', Rule.OdotE: r'\odot_e',
    Rule.OtimesI: r'\otimes_i', Rule.OtimesE: r'\otimes_e',
    Rule.Entropy: r'\mathit{entropy}',
}


def _annotation(p: Proof) -> str:
    name = _TEXT_RULES.get(p.rule, p.rule.value)
    if p.name is not None:
        name += f' {p.name}'
    if p.var is not None:
        name += f' {p.var}'
    if p.pair is not None:
        name += f' {p.pair[0]} {p.pair[1]}'
    return name


def render_text(p: Proof) -> str:
    """One sequent per line, premises indented below their conclusion."""
    lines: list[str] = []

    def go(n: Proof, depth: int):
        lines.append(f'{"  " * depth}{format_sequent(n.conclusion)}    [{_annotation(n)}]')
        for q in n.premises:
            go(q, depth + 1)

    go(p, 0)
    return '\n'.join(lines)


# ---------------------------------------------------------------- LaTeX

_LATEX_OPS = {'o': r'\odot', '*': r'\otimes', '\\': r'\backslash', '/': '/', '-o': r'\multimap'}


def latex_formula(f: Formula) -> str:
    """Same bracketing as the text syntax, with LaTeX connectives."""
    return ' '.join(_LATEX_OPS.get(word, word) for word in format_formula(f).split(' '))


def latex_context(t: Context) -> str:
    match t:
        case Leaf(occ):
            return f'{occ.id}{{:}}{latex_formula(occ.formula)}'
        case Seq(children):
            return r'\langle ' + '; '.join(latex_context(c) for c in children) + r' \rangle'
        case Par(children):
            return '(' + ', '.join(latex_context(c) for c in children) + ')'
        case Hole():
            return r'[\,]'
        case Empty():
            return ''
    raise TypeError(f'not a context: {t!r}')


def _latex_label(p: Proof) -> str:
    if p.rule is Rule.ProperAxiom:
        return rf'\mathit{{{p.name}}}'
    label = _LATEX_RULES[p.rule]
    if p.var is not None:
        label += f'^{{{p.var}}}'
    if p.pair is not None:
        label += f'^{{{p.pair[0]},{p.pair[1]}}}'
    return label


def render_latex(p: Proof) -> str:
    """A ``prooftree`` environment for the bussproofs package."""
    lines = [r'\begin{prooftree}']
    infer = {0: 'AxiomC', 1: 'UnaryInfC', 2: 'BinaryInfC'}

    def go(n: Proof):
        for q in n.premises:
            go(q)
        sequent = rf'{latex_context(n.lhs)} \vdash {latex_formula(n.rhs)}'.strip()
        if not n.premises:
            lines.append(r'\AxiomC{}')
            lines.append(rf'\RightLabel{{\scriptsize ${_latex_label(n)}$}}')
            lines.append(rf'\UnaryInfC{{${sequent}$}}')
            return
        lines.append(rf'\RightLabel{{\scriptsize ${_latex_label(n)}$}}')
        lines.append(rf'\{infer[len(n.premises)]}{{${sequent}$}}')

    go(p)
    lines.append(r'\end{prooftree}')
    return '\n'.join(lines)


def render(p: Proof, fmt: str = 'text') -> str:
    if fmt == 'text':
        return render_text(p)
    if fmt == 'latex':
        return render_latex(p)
    raise ValueError(f'unknown format {fmt!r}')
