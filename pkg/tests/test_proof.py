from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from pcmll.context import parse_context
from pcmll.formula import Atom, LDiv, RDiv, parse_formula
from pcmll.grammar import Lexicon
from pcmll.proof import (Proof, ProofSyntaxError, Rule, RuleViolation, Sequent, axiom, check, entropy,
                         format_proof, is_valid, node, parse_proof, parse_sequent, principal_branch, proper)

from oracles import RandomProofs, closed_axioms

CORPUS = Path(__file__).parent.parent / 'corpus'
AXIOMS = Lexicon.load(CORPUS / 'schematic.lex').axioms()
A, B, C = Atom('A'), Atom('B'), Atom('C')


def violation(text: str, axioms=None) -> RuleViolation:
    with pytest.raises(RuleViolation) as e:
        check(parse_proof(text), axioms)
    return e.value


def test_axiom():
    check(parse_proof('(axiom [x:a |- a])'))
    assert violation('(axiom [x:a |- b])').reason == 'shape'


def test_elimination_builds_the_context_in_order():
    p = node(Rule.LfromE, axiom('f', RDiv(A, B)), axiom('b', B))
    assert p.conclusion == parse_sequent('<f:A / B; b:B> |- A')
    q = node(Rule.LtoE, axiom('c', C), axiom('g', LDiv(C, A)))
    assert q.conclusion == parse_sequent('<c:C; g:C \\ A> |- A')


def test_introduction_discharges_at_the_edge():
    body = node(Rule.LfromE, axiom('f', RDiv(A, B)), axiom('b', B))
    assert node(Rule.LfromI, body, var='b').conclusion == parse_sequent('f:A / B |- A / B')
    with pytest.raises(RuleViolation) as e:
        node(Rule.LtoI, body, var='b')
    assert e.value.reason == 'discharge'


@pytest.mark.parametrize('text, reason, path', [
    ('(/e [<f:A / B; b:A> |- A] (axiom [f:A / B |- A / B]) (axiom [b:A |- A]))', 'shape', ()),
    ('(/e [<f:A / B; f:B> |- A] (axiom [f:A / B |- A / B]) (axiom [f:B |- B]))', 'ids', ()),
    ('(/e [<b:B; f:A / B> |- A] (axiom [f:A / B |- A / B]) (axiom [b:B |- B]))', 'shape', ()),
    ('(\\i x [|- A \\ A] (axiom [y:A |- A]))', 'discharge', ()),
    ('(entropy [<x:A; y:B> |- A o B] (oi [(x:A, y:B) |- A o B] (axiom [x:A |- A]) (axiom [y:B |- B])))',
     'entropy', ()),
    ('(entropy [<y:B; x:A> |- A o B] (oi [<x:A; y:B> |- A o B] (axiom [x:A |- A]) (axiom [y:B |- B])))',
     'entropy', ()),
    ('(oe x y [<c:C; z:A o B> |- A o B] (axiom [z:A o B |- A o B])'
     ' (oi [<c:C; x:A; y:B> |- A o B] (axiom [x:A |- A]) (axiom [y:B |- B])))', 'shape', (1,)),
    ('(oe y x [z:A o B |- B o A] (axiom [z:A o B |- A o B])'
     ' (oi [<y:B; x:A> |- B o A] (axiom [y:B |- B]) (axiom [x:A |- A])))', 'shape', ()),
    ('(*e x y [|- A] (axiom [z:A * B |- A * B]) (axiom [x:A |- A]))', 'shape', ()),
])
def test_violations(text, reason, path):
    e = violation(text)
    assert (e.reason, e.path) == (reason, path)


def test_product_elimination_inside_a_sequence():
    check(parse_proof(
        '(oe x y [<c:C; z:A o B> |- C o (A o B)]'
        ' (axiom [z:A o B |- A o B])'
        ' (oi [<c:C; x:A; y:B> |- C o (A o B)] (axiom [c:C |- C])'
        ' (oi [<x:A; y:B> |- A o B] (axiom [x:A |- A]) (axiom [y:B |- B]))))'))


def test_carving_across_an_interleaved_hypothesis_fails():
    text = ('(oe x y [<z:A o B; c:C> |- (A o C) o B]'
            ' (axiom [z:A o B |- A o B])'
            ' (oi [<x:A; c:C; y:B> |- (A o C) o B]'
            ' (oi [<x:A; c:C> |- A o C] (axiom [x:A |- A]) (axiom [c:C |- C])) (axiom [y:B |- B])))')
    assert violation(text).reason == 'equivalence'


def test_proper_axioms_need_a_table():
    text = (CORPUS / 'lambek_detour.proof').read_text()
    assert violation(text).reason == 'axiom'
    check(parse_proof(text), AXIOMS)
    e = violation(text, {**AXIOMS, 'd1': [parse_formula('A / B')]})
    assert (e.reason, e.path) == ('axiom', (1, 1, 0))


def test_proper_axioms_match_up_to_renaming():
    check(proper('d3', parse_sequent('q:F |- B')), AXIOMS)
    check(proper('dC', parse_sequent('|- C')), {'dC': C})


def test_parse_format_round_trip_on_corpus():
    for path in sorted(CORPUS.glob('*.proof')):
        p = parse_proof(path.read_text())
        assert parse_proof(format_proof(p)) == p


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(['lambek', 'pcmll']))
def test_random_proofs_round_trip(seed, mode):
    p = RandomProofs(seed, mode).proof()
    check(p, closed_axioms(p))
    assert parse_proof(format_proof(p)) == p


def test_labels_and_comments_are_ignored():
    text = '# leading\n(axiom [x:a |- a] {x}) # trailing\n'
    assert parse_proof(text) == parse_proof('(axiom [x:a |- a])')


@pytest.mark.parametrize('text, where', [
    ('(axiom [x:a |- a]', 'line 1, column 18'),
    ('(axion [x:a |- a])', 'line 1, column 2'),
    ('(axiom\n  [x:a |-])', 'line 2, column 10'),
    ('(\\i [x:a |- a \\ a] (axiom [x:a |- a]))', 'line 1, column 2'),
    ('(axiom [x:a |- a]) (axiom [y:a |- a])', 'line 1, column 20'),
])
def test_syntax_errors_report_positions(text, where):
    with pytest.raises(ProofSyntaxError) as e:
        parse_proof(text)
    assert where in str(e.value)


def test_principal_branch_follows_major_premises():
    p = parse_proof((CORPUS / 'lambek_detour.proof').read_text())
    assert principal_branch(p) == [(), (1,), (1, 1), (1, 1, 0)]


def test_entropy_constructor():
    p = node(Rule.OdotI, axiom('x', A), axiom('y', B))
    q = entropy(p, parse_context('(x:A, y:B)'))
    assert is_valid(q)
    with pytest.raises(RuleViolation):
        entropy(q, p.lhs)


def test_proof_size():
    p = parse_proof((CORPUS / 'pcmll_product_chain.proof').read_text())
    assert len(p) == 7
    assert isinstance(p, Proof) and p.conclusion == Sequent(parse_context(''), Atom('D'))
