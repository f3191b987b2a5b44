"""Proof kernel, normalizer and categorial grammar front end for partially
commutative multiplicative linear logic in natural deduction."""
from .context import Context, Occurrence, entropy_leq, find_equiv_pair, format_context, parse_context
from .formula import Formula, format_formula, parse_formula, subformulas
from .grammar import Lexicon, LabeledDerivation, derive, expand, merge, move
from .normalize import (FuelExhausted, Measure, check_subformula_property, find_extended_redexes,
                        find_redexes, is_normal, measure, normalize, run)
from .proof import Proof, Rule, RuleViolation, Sequent, check, format_proof, parse_proof, principal_branch
from .render import render

__all__ = [
    'Context', 'Occurrence', 'entropy_leq', 'find_equiv_pair', 'format_context', 'parse_context',
    'Formula', 'format_formula', 'parse_formula', 'subformulas',
    'Lexicon', 'LabeledDerivation', 'derive', 'expand', 'merge', 'move',
    'FuelExhausted', 'Measure', 'check_subformula_property', 'find_extended_redexes',
    'find_redexes', 'is_normal', 'measure', 'normalize', 'run',
    'Proof', 'Rule', 'RuleViolation', 'Sequent', 'check', 'format_proof', 'parse_proof',
    'principal_branch', 'render',
]
