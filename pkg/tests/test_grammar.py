from pathlib import Path

import pytest

from pcmll.context import format_context
from pcmll.formula import format_formula, parse_formula
from pcmll.grammar import (EPS, GrammarError, Lexicon, derive, expand, format_derivation, hyp, lex, merge,
                           move, move_pairs)
from pcmll.proof import Rule, check, walk

ROOT = Path(__file__).parent.parent
ITALIAN = Lexicon.load(ROOT / 'lexicon' / 'italian.lex')
F = parse_formula


def skeleton(d):
    """Derivation shape with hypothesis names erased: words for lexical leaves, types for hypotheses."""
    if d.rule == 'lex':
        return d.word
    if d.rule == 'hyp':
        return format_formula(d.rhs)
    return (d.rule,) + tuple(skeleton(p) for p in d.premises)


# che cosa [EPS] fai, with the silent k * d moved under the complementizer
EXPECTED_SKELETON = (
    'move', ('merge', 'che', 'cosa'),
    ('merge', 'wh', ('merge', EPS, ('move', EPS,
     ('merge', 'k', ('merge', EPS, ('merge', 'd', ('move', 'k * d',
      ('merge', 'k', ('merge', 'fai', 'd'))))))))))


def test_lexicon():
    assert ITALIAN.words == {'che', 'cosa', 'fai', EPS}
    assert [format_formula(t) for t in ITALIAN.types(EPS)] == ['k * d', 'k \\ t / v', 'wh \\ c / t']
    assert ITALIAN.types('nessuno') == []


def test_lexicon_errors():
    with pytest.raises(GrammarError, match='line 2'):
        Lexicon.parse('a\tn\nb\n')
    with pytest.raises(GrammarError, match='line 1'):
        Lexicon.parse('a\tn /\n')


def test_merge_in_both_directions():
    d = merge(lex('cosa', F('n')), lex('x', F('n \\ s')))
    assert (format_formula(d.rhs), d.label) == ('s', ('cosa', 'x'))
    d = merge(lex('che', F('wh * (k * d) / n')), lex('cosa', F('n')))
    assert (format_formula(d.rhs), d.label) == ('wh * (k * d)', ('che', 'cosa'))
    with pytest.raises(GrammarError, match='do not merge'):
        merge(lex('cosa', F('n')), lex('che', F('wh / n')))


def test_merge_flattens_contexts():
    d = merge(hyp('k1', F('k')), merge(lex('fai', F('k \\ d \\ v / d')), hyp('d1', F('d'))))
    assert format_context(d.lhs) == '(d1:d, k1:k)'
    assert d.label == ('k1', 'fai', 'd1')
    with pytest.raises(GrammarError, match='both sides'):
        merge(hyp('d1', F('d')), d)


def test_move_substitutes_the_label():
    body = merge(hyp('k1', F('k')), merge(lex('fai', F('k \\ d \\ v / d')), hyp('d1', F('d'))))
    pair = lex(EPS, F('k * d'))
    assert move_pairs(pair, body) == [('k1', 'd1')]
    d = move(pair, body)
    assert d.label == ('fai',)
    assert format_context(d.lhs) == ''
    moved = move(hyp('kd', F('k * d')), body)
    assert moved.label == ('kd', 'fai')
    with pytest.raises(GrammarError):
        move(pair, body, ('d1', 'k1'))
    with pytest.raises(GrammarError):
        move(lex('cosa', F('n')), body)


def test_expansion_is_a_kernel_proof():
    body = merge(hyp('k1', F('k')), merge(lex('fai', F('k \\ d \\ v / d')), hyp('d1', F('d'))))
    p = expand(move(hyp('kd', F('k * d')), body))
    check(p, ITALIAN.axioms())
    rules = [n.rule for _, n in walk(p)]
    assert rules.count(Rule.OtimesE) == 1 and rules.count(Rule.Entropy) == 2


def test_derive_single_word():
    lexicon = Lexicon.parse('cosa\tn\n')
    (d,) = derive(lexicon, ['cosa'], F('n'), 0)
    assert format_derivation(d) == '(lex cosa [|- n] {cosa})'
    assert derive(lexicon, ['cosa'], F('s'), 3) == []
    assert derive(lexicon, ['niente'], F('n'), 3) == []


def test_derive_the_question():
    found = derive(ITALIAN, 'che cosa fai'.split(), F('c'), 12)
    assert found
    for d in found:
        assert d.label == ('che', 'cosa', 'fai')
        assert format_formula(d.rhs) == 'c' and format_context(d.lhs) == ''
    shapes = [skeleton(d) for d in found]
    assert EXPECTED_SKELETON in shapes
    d = found[shapes.index(EXPECTED_SKELETON)]
    assert (d.count('merge'), d.count('move')) == (8, 3)
    p = expand(d)
    check(p, ITALIAN.axioms())
    assert format_formula(p.rhs) == 'c'


def test_derive_respects_the_bound():
    assert derive(ITALIAN, 'che cosa fai'.split(), F('c'), 10) == []
    assert derive(ITALIAN, 'cosa che fai'.split(), F('c'), 12) == []


def test_derive_does_not_depend_on_lexicon_order():
    shuffled = Lexicon(tuple(reversed(ITALIAN.entries)))
    words = 'che cosa fai'.split()
    first = [format_derivation(d) for d in derive(ITALIAN, words, F('c'), 12)]
    second = [format_derivation(d) for d in derive(shuffled, words, F('c'), 12)]
    assert first == second
