"""Categorial minimalist grammar on top of the kernel.

Words are proper axioms ``|- w:T``. Derivations use three derived rules:

    merge   an implicative elimination followed by an entropy that forgets
            the order between the two contexts; the label is the
            concatenation of the two labels
    move    a commutative product elimination ``t[s/x, e/y]``; the label of
            the product replaces the hypothesis x and y is erased

Hypotheses are the variables of the labels. Every context built this way is
a flat parallel context, so a move can always carve its pair.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Iterable, Iterator, Union

from . import context as ctx
from .context import EMPTY, Context, format_context, leaf, par
from .formula import Atom, CProd, Formula, LDiv, RDiv, format_formula, parse_formula, subformulas
from .proof import Proof, Rule, Sequent, axiom, entropy, format_sequent, node, parse_sequent, proper

EPS = 'EPS'


class GrammarError(ValueError):
    pass


# ---------------------------------------------------------------- lexicon

@dataclass(frozen=True)
class Lexicon:
    """Word to type table; silent entries are filed under ``EPS``."""
    entries: tuple[tuple[str, Union[Formula, Sequent]], ...] = ()

    @classmethod
    def parse(cls, text: str) -> Lexicon:
        entries = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split('\t', 1) if '\t' in line else line.split(None, 1)
            if len(parts) != 2:
                raise GrammarError(f'line {lineno}: expected word<TAB>type')
            word, text_type = parts[0].strip(), parts[1].strip()
            try:
                t = parse_sequent(text_type) if '|-' in text_type else parse_formula(text_type)
            except ValueError as e:
                raise GrammarError(f'line {lineno}: {e}') from None
            entries.append((word, t))
        return cls(tuple(entries))

    @classmethod
    def load(cls, path: str | FilePath) -> Lexicon:
        return cls.parse(FilePath(path).read_text())

    @property
    def words(self) -> frozenset[str]:
        return frozenset(w for w, _ in self.entries)

    def types(self, word: str) -> list[Formula]:
        """Closed types of a word, in a canonical order."""
        found = {t for w, t in self.entries if w == word and not isinstance(t, Sequent)}
        return sorted(found, key=format_formula)

    def axioms(self) -> dict[str, tuple]:
        """Table of admissible proper axioms for the kernel checker."""
        table: dict[str, list] = {}
        for w, t in self.entries:
            table.setdefault(w, []).append(t)
        return {w: tuple(ts) for w, ts in table.items()}


# ---------------------------------------------------------------- derivations

@dataclass(frozen=True)
class LabeledSequent:
    sequent: Sequent
    label: tuple[str, ...]      # words and hypothesis ids; each hypothesis occurs once

    @property
    def lhs(self) -> Context:
        return self.sequent.lhs

    @property
    def rhs(self) -> Formula:
        return self.sequent.rhs

    @property
    def words(self) -> tuple[str, ...]:
        hyps = ctx.ids(self.lhs)
        return tuple(t for t in self.label if t not in hyps)


@dataclass(frozen=True)
class LabeledDerivation:
    rule: str                   # 'lex', 'hyp', 'merge' or 'move'
    conclusion: LabeledSequent
    premises: tuple[LabeledDerivation, ...] = ()
    word: str | None = None
    pair: tuple[str, str] | None = None

    @property
    def label(self) -> tuple[str, ...]:
        return self.conclusion.label

    @property
    def lhs(self) -> Context:
        return self.conclusion.lhs

    @property
    def rhs(self) -> Formula:
        return self.conclusion.rhs

    def nodes(self) -> Iterator[LabeledDerivation]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def count(self, rule: str) -> int:
        return sum(1 for n in self.nodes() if n.rule == rule)


def _hyp_ids(d: LabeledDerivation) -> set[str]:
    return {n.label[0] for n in d.nodes() if n.rule == 'hyp'}


def lex(word: str, formula: Formula) -> LabeledDerivation:
    label = () if word == EPS else (word,)
    return LabeledDerivation('lex', LabeledSequent(Sequent(EMPTY, formula), label), word=word)


def hyp(var: str, formula: Formula) -> LabeledDerivation:
    return LabeledDerivation('hyp', LabeledSequent(Sequent(leaf(var, formula), formula), (var,)))


def _disjoint(d1: LabeledDerivation, d2: LabeledDerivation):
    clash = _hyp_ids(d1) & _hyp_ids(d2)
    if clash:
        raise GrammarError(f'hypotheses used on both sides: {sorted(clash)}')


def merge(d1: LabeledDerivation, d2: LabeledDerivation) -> LabeledDerivation:
    """Combine an argument with a functor on its right, or a functor with an argument on its right."""
    a, b = d1.rhs, d2.rhs
    if isinstance(b, LDiv) and b.arg == a:
        result = b.result
    elif isinstance(a, RDiv) and a.arg == b:
        result = a.result
    else:
        raise GrammarError(f'types do not merge: {format_formula(a)} and {format_formula(b)}')
    _disjoint(d1, d2)
    conclusion = LabeledSequent(Sequent(par(d1.lhs, d2.lhs), result), d1.label + d2.label)
    return LabeledDerivation('merge', conclusion, (d1, d2))


def move_pairs(d1: LabeledDerivation, d2: LabeledDerivation) -> list[tuple[str, str]]:
    """Hypothesis pairs of d2 that the product of d1 can bind, leftmost first."""
    if not isinstance(d1.rhs, CProd):
        return []
    occs = list(ctx.occurrences(d2.lhs))
    return [(x.id, y.id) for x in occs for y in occs
            if x.id != y.id and x.formula == d1.rhs.left and y.formula == d1.rhs.right
            and ctx.find_equiv_pair(d2.lhs, x.id, y.id, 'par') is not None]


def move(d1: LabeledDerivation, d2: LabeledDerivation, pair: tuple[str, str] | None = None) -> LabeledDerivation:
    """Bind the hypotheses ``pair`` of d2 with the product concluded by d1."""
    pairs = move_pairs(d1, d2)
    if pair is None:
        if not pairs:
            raise GrammarError(f'no hypothesis pair for {format_formula(d1.rhs)} in {format_context(d2.lhs)}')
        pair = pairs[0]
    elif pair not in pairs:
        raise GrammarError(f'{pair[0]}, {pair[1]} cannot be bound by {format_formula(d1.rhs)}')
    _disjoint(d1, d2)
    x, y = pair
    hole = ctx.find_equiv_pair(d2.lhs, x, y, 'par')
    label: list[str] = []
    for t in d2.label:
        if t == x:
            label.extend(d1.label)
        elif t != y:
            label.append(t)
    conclusion = LabeledSequent(Sequent(ctx.substitute(hole, d1.lhs), d2.rhs), tuple(label))
    return LabeledDerivation('move', conclusion, (d1, d2), pair=pair)


def expand(d: LabeledDerivation) -> Proof:
    """Kernel proof of a derivation: merge is an elimination plus entropy, move a product elimination."""
    match d.rule:
        case 'lex':
            return proper(d.word, d.conclusion.sequent)
        case 'hyp':
            return axiom(d.label[0], d.rhs)
        case 'merge':
            p1, p2 = (expand(p) for p in d.premises)
            rule = Rule.LtoE if isinstance(p2.rhs, LDiv) and p2.rhs.arg == p1.rhs else Rule.LfromE
            return entropy(node(rule, p1, p2), d.lhs)
        case 'move':
            p1, p2 = (expand(p) for p in d.premises)
            return node(Rule.OtimesE, p1, p2, pair=d.pair)
    raise GrammarError(f'unknown derived rule {d.rule!r}')


def format_label(label: Iterable[str]) -> str:
    text = ' '.join(label)
    return text if text else 'ε'


def format_derivation(d: LabeledDerivation, indent: int = 0) -> str:
    """Proof text with derived rules and a ``{label}`` on every node."""
    head = d.rule
    if d.word is not None:
        head += f' {d.word}'
    if d.pair is not None:
        head += f' {d.pair[0]} {d.pair[1]}'
    pad = '  ' * indent
    text = f'{pad}({head} [{format_sequent(d.conclusion.sequent)}] {{{format_label(d.label)}}}'
    if not d.premises:
        return text + ')'
    inner = '\n'.join(format_derivation(p, indent + 1) for p in d.premises)
    return f'{text}\n{inner})'


# ---------------------------------------------------------------- search

# An item abstracts a derivation up to renaming of its hypotheses: variables
# are numbered by their position in the label, and ``types`` gives the type
# of each. Contexts are flat, so the item determines the conclusion.

Token = Union[str, int]


@dataclass(frozen=True)
class _Item:
    rhs: Formula
    label: tuple[Token, ...]
    types: tuple[Formula, ...]


def _renumber(label: list[Token], types: dict[int, Formula]) -> tuple[list[Token], tuple[Formula, ...]]:
    order: dict[int, int] = {}
    out: list[Token] = []
    for t in label:
        if isinstance(t, int):
            t = order.setdefault(t, len(order))
        out.append(t)
    new_types = [None] * len(order)
    for old, new in order.items():
        new_types[new] = types[old]
    return out, tuple(new_types)


def _item_merge(a: _Item, b: _Item) -> _Item | None:
    if isinstance(b.rhs, LDiv) and b.rhs.arg == a.rhs:
        result = b.rhs.result
    elif isinstance(a.rhs, RDiv) and a.rhs.arg == b.rhs:
        result = a.rhs.result
    else:
        return None
    shift = len(a.types)
    label = a.label + tuple(t + shift if isinstance(t, int) else t for t in b.label)
    return _Item(result, label, a.types + b.types)


def _item_moves(a: _Item, b: _Item) -> Iterator[tuple[int, int, _Item]]:
    if not isinstance(a.rhs, CProd):
        return
    for x, tx in enumerate(b.types):
        if tx != a.rhs.left:
            continue
        for y, ty in enumerate(b.types):
            if y == x or ty != a.rhs.right:
                continue
            shift = len(b.types)
            label: list[Token] = []
            for t in b.label:
                if t == x:
                    label.extend(s + shift if isinstance(s, int) else s for s in a.label)
                elif t != y:
                    label.append(t)
            types = dict(enumerate(b.types))
            types.update((i + shift, f) for i, f in enumerate(a.types))
            new_label, new_types = _renumber(label, types)
            yield x, y, _Item(b.rhs, tuple(new_label), new_types)


class _Search:
    def __init__(self, lexicon: Lexicon, words: list[str], goal: Formula, bound: int):
        self.words = list(words)
        self.goal = goal
        self.bound = bound
        self.budget = Counter(words)
        self.sentence = ' '.join(words) + ' '
        self.patterns: dict[tuple, re.Pattern | None] = {}
        self.chart: list[dict[_Item, list[tuple]]] = []

        leaves: dict[_Item, list[tuple]] = {}
        types = set()
        for w in sorted(set(words) | {EPS}):
            for f in lexicon.types(w):
                types.add(f)
                label = () if w == EPS else (w,)
                leaves.setdefault(_Item(f, label, ()), []).append(('lex', w, f))
        hyp_types = sorted({part for f in types for g in subformulas(f) if isinstance(g, CProd)
                            for part in (g.left, g.right)}, key=format_formula)
        for f in hyp_types:
            leaves.setdefault(_Item(f, (0,), (f,)), []).append(('hyp', f))
        self.chart.append({i: bp for i, bp in leaves.items() if self.viable(i, 0)})

    def viable(self, item: _Item, n: int) -> bool:
        """Could this item still end up in a derivation of the sentence within the bound?"""
        if (len(item.types) + 1) // 2 > self.bound - n:
            return False
        words = Counter(t for t in item.label if isinstance(t, str))
        if words - self.budget:
            return False
        shape = tuple(t if isinstance(t, str) else None for t in item.label)
        if shape not in self.patterns:
            parts = [r'(?:\S+ )*?' if t is None else re.escape(t) + ' ' for t in shape]
            self.patterns[shape] = re.compile('(?:^|(?<= ))' + ''.join(parts))
        return self.patterns[shape].search(self.sentence) is not None

    def run(self):
        for n in range(1, self.bound + 1):
            level: dict[_Item, list[tuple]] = {}
            for n1 in range(n):
                n2 = n - 1 - n1
                for a in self.chart[n1]:
                    for b in self.chart[n2]:
                        merged = _item_merge(a, b)
                        if merged is not None and self.viable(merged, n):
                            level.setdefault(merged, []).append(('merge', (n1, a), (n2, b)))
                        for x, y, moved in _item_moves(a, b):
                            if self.viable(moved, n):
                                level.setdefault(moved, []).append(('move', (n1, a), (n2, b), x, y))
            self.chart.append(level)

    def goals(self) -> Iterator[tuple[int, _Item]]:
        target = tuple(w for w in self.words if w != EPS)
        for n, level in enumerate(self.chart):
            for item in level:
                if item.rhs == self.goal and not item.types and item.label == target:
                    yield n, item

    def trees(self, n: int, item: _Item) -> Iterator[tuple]:
        for bp in self.chart[n][item]:
            if bp[0] in ('lex', 'hyp'):
                yield bp
                continue
            (n1, a), (n2, b) = bp[1], bp[2]
            for t1 in self.trees(n1, a):
                for t2 in self.trees(n2, b):
                    yield (bp[0], t1, t2) + bp[3:]


def _realize(tree: tuple, fresh: Iterator[int], words: frozenset[str]) -> LabeledDerivation:
    match tree:
        case ('lex', w, f):
            return lex(w, f)
        case ('hyp', f):
            base = ''.join(_atoms(f)).lower() or 'x'
            name = f'{base}{next(fresh)}'
            while name in words:
                name = f'{base}{next(fresh)}'
            return hyp(name, f)
        case ('merge', t1, t2):
            return merge(_realize(t1, fresh, words), _realize(t2, fresh, words))
        case ('move', t1, t2, x, y):
            d1, d2 = _realize(t1, fresh, words), _realize(t2, fresh, words)
            hyps = [t for t in d2.label if t in ctx.ids(d2.lhs)]
            return move(d1, d2, (hyps[x], hyps[y]))
    raise GrammarError(f'bad derivation tree {tree!r}')


def _atoms(f: Formula) -> list[str]:
    match f:
        case Atom(name):
            return [name]
        case CProd(a, b):
            return _atoms(a) + _atoms(b)
    return []


def derive(lexicon: Lexicon, words: list[str], goal: Formula, bound: int) -> list[LabeledDerivation]:
    """All derivations of ``|- words : goal`` with at most ``bound`` merge and move nodes."""
    if bound < 0:
        raise ValueError('bound must be non-negative')
    search = _Search(lexicon, words, goal, bound)
    search.run()
    found = []
    for n, item in search.goals():
        for tree in search.trees(n, item):
            found.append(_realize(tree, iter(range(1, 10 ** 9)), lexicon.words))
    found.sort(key=lambda d: (sum(1 for x in d.nodes() if x.premises), format_derivation(d)))
    return found
