"""Natural-deduction proofs and the rule checker.

A proof node stores its rule, its conclusion sequent and its premises.
Occurrence ids tie hypotheses together across rules: an introduction names the
occurrence it discharges, a product elimination names the two occurrences it
carves out of its right premise, and every hypothesis keeps its id on the way
down to the root.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace as _replace
from enum import Enum
from typing import Iterator, Mapping

from . import context as ctx
from .context import Context, EMPTY, Leaf, Occurrence, format_context, read_context
from .formula import (CProd, Formula, LDiv, LinImp, NcProd, RDiv, TokenStream, format_formula,
                      read_formula)

Path = tuple[int, ...]


class Rule(Enum):
    Axiom = 'axiom'
    ProperAxiom = 'proper'
    LtoE = '\\e'
    LfromE = '/e'
    LltoE = '-oe'
    LtoI = '\\i'
    LfromI = '/i'
    LltoI = '-oi'
    OdotI = 'oi'
    OdotE = 'oe'
    OtimesI = '*i'
    OtimesE = '*e'
    Entropy = 'entropy'

    def __repr__(self) -> str:
        return self.name

    @property
    def arity(self) -> int:
        return ARITY[self]


ARITY = {Rule.Axiom: 0, Rule.ProperAxiom: 0, Rule.LtoI: 1, Rule.LfromI: 1, Rule.LltoI: 1,
         Rule.Entropy: 1}
ARITY.update({r: 2 for r in Rule if r not in ARITY})

LEAVES = frozenset({Rule.Axiom, Rule.ProperAxiom})
IMP_ELIMS = frozenset({Rule.LtoE, Rule.LfromE, Rule.LltoE})
IMP_INTROS = frozenset({Rule.LtoI, Rule.LfromI, Rule.LltoI})
PROD_ELIMS = frozenset({Rule.OdotE, Rule.OtimesE})
PROD_INTROS = frozenset({Rule.OdotI, Rule.OtimesI})
ELIMS = IMP_ELIMS | PROD_ELIMS
INTROS = IMP_INTROS | PROD_INTROS

# elimination -> matching introduction
PARTNER = {Rule.LtoE: Rule.LtoI, Rule.LfromE: Rule.LfromI, Rule.LltoE: Rule.LltoI,
           Rule.OdotE: Rule.OdotI, Rule.OtimesE: Rule.OtimesI}
CONNECTIVE = {Rule.LtoE: LDiv, Rule.LfromE: RDiv, Rule.LltoE: LinImp,
              Rule.LtoI: LDiv, Rule.LfromI: RDiv, Rule.LltoI: LinImp,
              Rule.OdotE: NcProd, Rule.OdotI: NcProd, Rule.OtimesE: CProd, Rule.OtimesI: CProd}

# Premise holding the eliminated formula, and the premise the principal branch
# climbs into. They differ only for product eliminations, whose branch follows
# the premise where the pair of hypotheses sits.
CARRIER = {Rule.LtoE: 1, Rule.LfromE: 0, Rule.LltoE: 1, Rule.OdotE: 0, Rule.OtimesE: 0}
MAJOR = {Rule.LtoE: 1, Rule.LfromE: 0, Rule.LltoE: 1, Rule.OdotE: 1, Rule.OtimesE: 1,
         Rule.LtoI: 0, Rule.LfromI: 0, Rule.LltoI: 0, Rule.Entropy: 0}


@dataclass(frozen=True)
class Sequent:
    lhs: Context
    rhs: Formula

    def __str__(self) -> str:
        return format_sequent(self)


@dataclass(frozen=True)
class Proof:
    rule: Rule
    conclusion: Sequent
    premises: tuple[Proof, ...] = ()
    var: str | None = None                  # occurrence discharged by an introduction
    pair: tuple[str, str] | None = None     # occurrences carved by a product elimination
    name: str | None = None                 # proper axiom name
    _size: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, '_size', 1 + sum(p._size for p in self.premises))

    def __len__(self) -> int:
        return self._size

    def __hash__(self) -> int:
        h = self.__dict__.get('_hash')
        if h is None:
            h = hash((self.rule, self.conclusion, self.premises, self.var, self.pair, self.name))
            object.__setattr__(self, '_hash', h)
        return h

    def __str__(self) -> str:
        return format_proof(self)

    @property
    def lhs(self) -> Context:
        return self.conclusion.lhs

    @property
    def rhs(self) -> Formula:
        return self.conclusion.rhs


class ProofError(ValueError):
    pass


class RuleViolation(ProofError):
    def __init__(self, path: Path, rule: Rule, reason: str, detail: str = ''):
        self.path, self.rule, self.reason, self.detail = path, rule, reason, detail
        where = '/'.join(map(str, path)) or 'root'
        super().__init__(f'{rule.name} at {where}: {reason}' + (f' ({detail})' if detail else ''))


# ---------------------------------------------------------------- conclusions

def infer(rule: Rule, premises: tuple[Proof, ...], var: str | None = None,
          pair: tuple[str, str] | None = None) -> Sequent:
    """Conclusion forced by the rule; raises RuleViolation with an empty path when it does not apply."""
    def fail(reason: str, detail: str = ''):
        raise RuleViolation((), rule, reason, detail)

    if len(premises) != rule.arity or rule in LEAVES or rule is Rule.Entropy:
        fail('shape', 'conclusion is not determined by the premises')
    if rule.arity == 2:
        left, right = premises
        clash = ctx.ids(left.lhs) & ctx.ids(right.lhs)
        if clash:
            fail('ids', f'hypotheses {sorted(clash)} appear in both premises')

    if rule in IMP_ELIMS:
        carrier = premises[CARRIER[rule]]
        arg = premises[1 - CARRIER[rule]]
        f = carrier.rhs
        if not isinstance(f, CONNECTIVE[rule]) or f.arg != arg.rhs:
            fail('shape', f'cannot eliminate {format_formula(f)} with {format_formula(arg.rhs)}')
        if rule is Rule.LltoE:
            lhs = ctx.par(left.lhs, right.lhs)
        else:
            lhs = ctx.seq(left.lhs, right.lhs)
        return Sequent(lhs, f.result)

    if rule in PROD_INTROS:
        combine = ctx.seq if rule is Rule.OdotI else ctx.par
        return Sequent(combine(left.lhs, right.lhs), CONNECTIVE[rule](left.rhs, right.rhs))

    if rule in IMP_INTROS:
        (body,) = premises
        dom = ctx.domain(body.lhs)
        if var is None or var not in dom:
            fail('discharge', f'no hypothesis {var} to discharge')
        rest = ctx.remove(body.lhs, var)
        hyp = Leaf(Occurrence(var, dom[var]))
        if rule is Rule.LtoI:
            expected, result = ctx.seq(hyp, rest), LDiv(dom[var], body.rhs)
        elif rule is Rule.LfromI:
            expected, result = ctx.seq(rest, hyp), RDiv(body.rhs, dom[var])
        else:
            expected, result = ctx.par(hyp, rest), LinImp(dom[var], body.rhs)
        if body.lhs != expected:
            fail('discharge', f'{var} is not placed as the rule requires in {format_context(body.lhs)}')
        return Sequent(rest, result)

    if rule in PROD_ELIMS:
        f = left.rhs
        if not isinstance(f, CONNECTIVE[rule]):
            fail('shape', f'left premise does not conclude a {CONNECTIVE[rule].__name__}')
        if pair is None:
            fail('shape', 'no carved pair')
        a, b = pair
        dom = ctx.domain(right.lhs)
        if dom.get(a) != f.left or dom.get(b) != f.right:
            fail('shape', f'carved hypotheses {a}, {b} do not match {format_formula(f)}')
        mode = 'seq' if rule is Rule.OdotE else 'par'
        hole = ctx.find_equiv_pair(right.lhs, a, b, mode)
        if hole is None:
            fail('equivalence', f'{a}, {b} are not an equivalent {mode} pair in {format_context(right.lhs)}')
        return Sequent(ctx.substitute(hole, left.lhs), right.rhs)

    fail('shape', 'unknown rule')


# ---------------------------------------------------------------- constructors

def axiom(id: str, formula: Formula) -> Proof:
    return Proof(Rule.Axiom, Sequent(Leaf(Occurrence(id, formula)), formula))


def proper(name: str, sequent: Sequent) -> Proof:
    return Proof(Rule.ProperAxiom, sequent, name=name)


def node(rule: Rule, *premises: Proof, var: str | None = None,
         pair: tuple[str, str] | None = None) -> Proof:
    """Apply a rule whose conclusion is forced by its premises."""
    return Proof(rule, infer(rule, premises, var, pair), premises, var=var, pair=pair)


def entropy(premise: Proof, lhs: Context) -> Proof:
    lhs = ctx.canonicalize(lhs)
    if not ctx.entropy_leq(lhs, premise.lhs):
        raise RuleViolation((), Rule.Entropy, 'entropy',
                            f'{format_context(lhs)} is not a suborder of {format_context(premise.lhs)}')
    return Proof(Rule.Entropy, Sequent(lhs, premise.rhs), (premise,))


def rebuild(p: Proof, premises: tuple[Proof, ...]) -> Proof:
    """Same rule and parameters over new premises, conclusion recomputed (not for entropy or leaves)."""
    return Proof(p.rule, infer(p.rule, premises, p.var, p.pair), premises, var=p.var, pair=p.pair)


# ---------------------------------------------------------------- checking

AxiomTable = Mapping[str, object]


def shape(t: Context) -> object:
    """Context with occurrence ids erased, as a hashable canonical value."""
    match t:
        case ctx.Leaf(occ):
            return format_formula(occ.formula)
        case ctx.Seq(children):
            return ('seq', tuple(shape(c) for c in children))
        case ctx.Par(children):
            return ('par', tuple(sorted((shape(c) for c in children), key=repr)))
    return ()


def sequent_shape(s: Sequent) -> tuple:
    return shape(s.lhs), format_formula(s.rhs)


def check(p: Proof, axioms: AxiomTable | None = None) -> None:
    """Raise RuleViolation at the first node that does not instantiate its rule.

    ``axioms`` maps proper axiom names to the sequents they may conclude (a
    Sequent, a Formula standing for a closed sequent, or a collection of
    those). Without it proper axioms are rejected.
    """
    seen: dict[str, Path] = {}
    for path, n in walk(p):
        if n.rule is Rule.Axiom or n.rule is Rule.ProperAxiom:
            for o in ctx.occurrences(n.lhs):
                if o.id in seen:
                    raise RuleViolation(path, n.rule, 'ids', f'hypothesis {o.id} introduced twice')
                seen[o.id] = path
        check_node(n, path, axioms)


def check_node(n: Proof, path: Path = (), axioms: AxiomTable | None = None) -> None:
    if len(n.premises) != n.rule.arity:
        raise RuleViolation(path, n.rule, 'shape', f'expected {n.rule.arity} premises')
    if n.rule is Rule.Axiom:
        if not (isinstance(n.lhs, Leaf) and n.lhs.occ.formula == n.rhs):
            raise RuleViolation(path, n.rule, 'shape', 'an axiom concludes x:A |- A')
        return
    if n.rule is Rule.ProperAxiom:
        if axioms is None:
            raise RuleViolation(path, n.rule, 'axiom', 'proper axioms need a lexicon')
        allowed = axioms.get(n.name, ())
        if not isinstance(allowed, (list, tuple, set, frozenset)):
            allowed = (allowed,)
        want = sequent_shape(n.conclusion)
        for entry in allowed:
            entry = entry if isinstance(entry, Sequent) else Sequent(EMPTY, entry)
            if sequent_shape(entry) == want:
                return
        raise RuleViolation(path, n.rule, 'axiom', f'{n.name} does not provide {format_sequent(n.conclusion)}')
    if n.rule is Rule.Entropy:
        (premise,) = n.premises
        if premise.rhs != n.rhs or not ctx.entropy_leq(n.lhs, premise.lhs):
            raise RuleViolation(path, n.rule, 'entropy',
                                f'{format_context(n.lhs)} is not a suborder of {format_context(premise.lhs)}')
        return
    try:
        expected = infer(n.rule, n.premises, n.var, n.pair)
    except RuleViolation as e:
        raise RuleViolation(path, n.rule, e.reason, e.detail) from None
    if expected != n.conclusion:
        raise RuleViolation(path, n.rule, 'shape',
                            f'concludes {format_sequent(n.conclusion)} instead of {format_sequent(expected)}')


def is_valid(p: Proof, axioms: AxiomTable | None = None) -> bool:
    try:
        check(p, axioms)
    except RuleViolation:
        return False
    return True


# ---------------------------------------------------------------- navigation

def walk(p: Proof, path: Path = ()) -> Iterator[tuple[Path, Proof]]:
    """Pre-order traversal."""
    yield path, p
    for i, q in enumerate(p.premises):
        yield from walk(q, path + (i,))


def postorder(p: Proof, path: Path = ()) -> Iterator[tuple[Path, Proof]]:
    for i, q in enumerate(p.premises):
        yield from postorder(q, path + (i,))
    yield path, p


def get(p: Proof, path: Path) -> Proof:
    for i in path:
        p = p.premises[i]
    return p


def put(p: Proof, path: Path, sub: Proof) -> Proof:
    """Replace the subproof at path; the caller keeps conclusions consistent."""
    if not path:
        return sub
    i = path[0]
    premises = p.premises[:i] + (put(p.premises[i], path[1:], sub),) + p.premises[i + 1:]
    return _replace(p, premises=premises)


def principal_branch(p: Proof, path: Path = ()) -> list[Path]:
    branch = [path]
    n = get(p, path)
    while n.rule in MAJOR:
        path = path + (MAJOR[n.rule],)
        n = n.premises[MAJOR[n.rule]]
        branch.append(path)
    return branch


def chain(p: Proof, path: Path) -> tuple[list[Path], Path] | None:
    """For an elimination, the product eliminations and entropies stacked on the
    premise carrying its formula, and the node above them.
    """
    n = get(p, path)
    if n.rule not in ELIMS:
        return None
    at = path + (CARRIER[n.rule],)
    m = n.premises[CARRIER[n.rule]]
    interior = []
    while m.rule in PROD_ELIMS or m.rule is Rule.Entropy:
        interior.append(at)
        at = at + (MAJOR[m.rule],)
        m = m.premises[MAJOR[m.rule]]
    return interior, at


def conjoined(p: Proof, elim: Path) -> Path | None:
    """The introduction conjoined to the elimination at ``elim``, across product
    eliminations and entropies only.
    """
    found = chain(p, elim)
    if found is None:
        return None
    _, top = found
    e, i = get(p, elim), get(p, top)
    if i.rule is PARTNER[e.rule] and i.rhs == e.premises[CARRIER[e.rule]].rhs:
        return top
    return None


def hypotheses(p: Proof) -> list[Occurrence]:
    return list(ctx.occurrences(p.lhs))


def leaf_of(p: Proof, id: str) -> Path | None:
    """Path to the leaf introducing hypothesis ``id``."""
    for path, n in walk(p):
        if n.rule in LEAVES and id in ctx.ids(n.lhs):
            return path
    return None


# ---------------------------------------------------------------- text format

def format_sequent(s: Sequent) -> str:
    left = format_context(s.lhs)
    return f'{left} |- {format_formula(s.rhs)}' if left else f'|- {format_formula(s.rhs)}'


def parse_sequent(text: str) -> Sequent:
    s = TokenStream(text)
    seq = read_sequent(s)
    if s.peek.kind != 'end':
        s.error('trailing input')
    return seq


def read_sequent(s: TokenStream) -> Sequent:
    lhs = read_context(s)
    s.expect('|-')
    return Sequent(lhs, read_formula(s))


def format_proof(p: Proof, indent: int = 0) -> str:
    """S-expression text: ``(rule args [sequent] premise...)``, one node per line."""
    head = p.rule.value
    if p.name is not None:
        head += f' {p.name}'
    if p.var is not None:
        head += f' {p.var}'
    if p.pair is not None:
        head += f' {p.pair[0]} {p.pair[1]}'
    pad = '  ' * indent
    text = f'{pad}({head} [{format_sequent(p.conclusion)}]'
    if not p.premises:
        return text + ')'
    inner = '\n'.join(format_proof(q, indent + 1) for q in p.premises)
    return f'{text}\n{inner})'


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count('\n', 0, pos) + 1
        col = pos - (text.rfind('\n', 0, pos) + 1) + 1
        super().__init__(f'{message} at line {line}, column {col}')
        self.pos = pos


_RULES = {r.value: r for r in Rule}


def parse_proof(text: str) -> Proof:
    reader = _ProofReader(text)
    p = reader.proof()
    reader.skip()
    if reader.pos != len(text):
        reader.error('trailing input')
    return p


class _ProofReader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ProofSyntaxError(message, self.text, self.pos)

    def skip(self):
        text = self.text
        while self.pos < len(text):
            if text[self.pos].isspace():
                self.pos += 1
            elif text[self.pos] == '#':
                end = text.find('\n', self.pos)
                self.pos = len(text) if end < 0 else end
            else:
                break

    def word(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() \
                and self.text[self.pos] not in '()[]{}':
            self.pos += 1
        if start == self.pos:
            self.error('expected a word')
        return self.text[start:self.pos]

    def delimited(self, open_: str, close: str) -> tuple[str, int]:
        self.skip()
        if not self.text.startswith(open_, self.pos):
            self.error(f'expected {open_!r}')
        end = self.text.find(close, self.pos + 1)
        if end < 0:
            self.error(f'unclosed {open_!r}')
        start = self.pos + 1
        self.pos = end + 1
        return self.text[start:end], start

    def proof(self) -> Proof:
        self.skip()
        if not self.text.startswith('(', self.pos):
            self.error("expected '('")
        self.pos += 1
        head_pos = self.pos
        rule = _RULES.get(self.word())
        if rule is None:
            self.pos = head_pos
            self.error('unknown rule')
        args = []
        self.skip()
        while self.pos < len(self.text) and self.text[self.pos] not in '[(){}':
            args.append(self.word())
            self.skip()
        body, start = self.delimited('[', ']')
        try:
            conclusion = parse_sequent(body)
        except ValueError as e:
            pos = getattr(e, 'pos', 0)
            self.pos = start + pos
            self.error(f'bad sequent: {getattr(e, "message", e)}')
        self.skip()
        if self.text.startswith('{', self.pos):
            self.delimited('{', '}')
        premises = []
        self.skip()
        while self.text.startswith('(', self.pos):
            premises.append(self.proof())
            self.skip()
        if not self.text.startswith(')', self.pos):
            self.error("expected ')'")
        self.pos += 1
        expected_args = {Rule.ProperAxiom: 1, Rule.OdotE: 2, Rule.OtimesE: 2}.get(rule, 1 if rule in IMP_INTROS else 0)
        if len(args) != expected_args:
            self.pos = head_pos
            self.error(f'{rule.value} takes {expected_args} argument(s)')
        kwargs: dict = {}
        if rule is Rule.ProperAxiom:
            kwargs['name'] = args[0]
        elif rule in IMP_INTROS:
            kwargs['var'] = args[0]
        elif rule in PROD_ELIMS:
            kwargs['pair'] = (args[0], args[1])
        if len(premises) != rule.arity:
            self.pos = head_pos
            self.error(f'{rule.value} takes {rule.arity} premise(s)')
        return Proof(rule, conclusion, tuple(premises), **kwargs)
