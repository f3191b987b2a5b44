"""Normalization of natural-deduction proofs.

Three kinds of rewrite steps:

* contraction of a redex, an introduction immediately followed by its
  elimination;
* commuting an elimination above the product elimination or entropy that
  produces the premise carrying its formula (``raise_elim``), which shortens a
  k-extended redex by one;
* in the Lambek fragment, pushing a product elimination up towards the rule
  that brings its two hypotheses together (``raise_product_elim``).

A redex whose discharged hypothesis is introduced by a proper axiom cannot be
contracted: the axiom stands for a subproof that is not available. Such
redexes are reported as stuck and left in place.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Callable, Iterator

from . import context as ctx
from .context import Par
from .formula import Formula, subformulas
from .proof import (CARRIER, IMP_ELIMS, LEAVES, PARTNER, PROD_ELIMS, Path, Proof, ProofError, Rule,
                    RuleViolation, Sequent, chain, get, leaf_of, postorder, put, rebuild, walk)

LAMBEK_RULES = frozenset({Rule.Axiom, Rule.ProperAxiom, Rule.LtoE, Rule.LfromE, Rule.LtoI,
                          Rule.LfromI, Rule.OdotI, Rule.OdotE})


class RedexKind(Enum):
    LfromRedex = 'LfromRedex'
    LtoRedex = 'LtoRedex'
    LltoRedex = 'LltoRedex'
    OdotLeft = 'OdotLeft'
    OdotRight = 'OdotRight'
    OtimesLeft = 'OtimesLeft'
    OtimesRight = 'OtimesRight'


_IMP_KIND = {Rule.LtoE: RedexKind.LtoRedex, Rule.LfromE: RedexKind.LfromRedex,
             Rule.LltoE: RedexKind.LltoRedex}
_LEFT_KIND = {Rule.OdotE: RedexKind.OdotLeft, Rule.OtimesE: RedexKind.OtimesLeft}
_RIGHT_KIND = {Rule.OdotE: RedexKind.OdotRight, Rule.OtimesE: RedexKind.OtimesRight}


@dataclass(frozen=True)
class RedexSite:
    kind: RedexKind
    location: Path
    stuck: bool = False


@dataclass(frozen=True)
class ExtendedRedex:
    elim: Path
    intro: Path
    k: int
    stuck: bool = False
    implicative: bool = True


class NotApplicable(ProofError):
    pass


class StuckRedex(NotApplicable):
    pass


class FuelExhausted(RuntimeError):
    def __init__(self, partial: Proof, steps: int):
        super().__init__(f'normalization did not finish within {steps} steps')
        self.partial = partial


@total_ordering
@dataclass(frozen=True)
class Measure:
    a: int
    b: int
    c: int

    def __lt__(self, other: Measure) -> bool:
        return (self.a, self.b, self.c) < (other.a, other.b, other.c)

    def __str__(self) -> str:
        return f'{self.a},{self.b},{self.c}'


# ---------------------------------------------------------------- redexes

def _opaque(p: Proof, ids: tuple[str, ...]) -> bool:
    """Some of these hypotheses come from a proper axiom rather than an axiom leaf."""
    for id in ids:
        at = leaf_of(p, id)
        if at is None or get(p, at).rule is not Rule.Axiom:
            return True
    return False


def _right_redex(n: Proof) -> bool:
    intro = n.premises[1]
    if intro.rule is not PARTNER[n.rule] or intro.rhs != n.premises[0].rhs:
        return False
    first, second = intro.premises
    return (first.rule is Rule.Axiom and second.rule is Rule.Axiom
            and (first.lhs.occ.id, second.lhs.occ.id) == n.pair)


def find_redexes(p: Proof) -> list[RedexSite]:
    """Every redex, innermost first and left to right."""
    sites = []
    for path, n in postorder(p):
        if n.rule in IMP_ELIMS:
            intro = n.premises[CARRIER[n.rule]]
            if intro.rule is PARTNER[n.rule]:
                sites.append(RedexSite(_IMP_KIND[n.rule], path, _opaque(intro, (intro.var,))))
        elif n.rule in PROD_ELIMS:
            if n.premises[0].rule is PARTNER[n.rule]:
                sites.append(RedexSite(_LEFT_KIND[n.rule], path, _opaque(n.premises[1], n.pair)))
            if _right_redex(n):
                sites.append(RedexSite(_RIGHT_KIND[n.rule], path))
    return sites


def graft(d: Proof, id: str, sub: Proof) -> Proof:
    """Replace the axiom introducing hypothesis ``id`` in d by the proof ``sub``."""
    at = leaf_of(d, id)
    if at is None:
        raise NotApplicable(f'no leaf introduces {id}')
    if get(d, at).rule is not Rule.Axiom:
        raise StuckRedex(f'{id} comes from a proper axiom')
    return _graft(d, at, id, sub)


def _graft(n: Proof, at: Path, id: str, sub: Proof) -> Proof:
    if not at:
        return sub
    i = at[0]
    child = _graft(n.premises[i], at[1:], id, sub)
    premises = n.premises[:i] + (child,) + n.premises[i + 1:]
    if n.rule is Rule.Entropy:
        lhs = ctx.replace(n.lhs, id, sub.lhs)
        return Proof(Rule.Entropy, Sequent(lhs, n.rhs), premises)
    return rebuild(n, premises)


def contract(p: Proof, site: RedexSite) -> Proof:
    n = get(p, site.location)
    kind = site.kind
    if kind in (RedexKind.LtoRedex, RedexKind.LfromRedex, RedexKind.LltoRedex):
        if n.rule not in IMP_ELIMS or _IMP_KIND[n.rule] is not kind:
            raise NotApplicable(f'no {kind.value} at {site.location}')
        intro = n.premises[CARRIER[n.rule]]
        arg = n.premises[1 - CARRIER[n.rule]]
        if intro.rule is not PARTNER[n.rule]:
            raise NotApplicable(f'no {kind.value} at {site.location}')
        result = graft(intro.premises[0], intro.var, arg)
    elif kind in (RedexKind.OdotLeft, RedexKind.OtimesLeft):
        if n.rule not in PROD_ELIMS or _LEFT_KIND[n.rule] is not kind \
                or n.premises[0].rule is not PARTNER[n.rule]:
            raise NotApplicable(f'no {kind.value} at {site.location}')
        first, second = n.premises[0].premises
        a, b = n.pair
        if _opaque(n.premises[1], (a, b)):
            raise StuckRedex(f'{a} or {b} comes from a proper axiom')
        result = graft(graft(n.premises[1], a, first), b, second)
    else:
        if n.rule not in PROD_ELIMS or _RIGHT_KIND[n.rule] is not kind or not _right_redex(n):
            raise NotApplicable(f'no {kind.value} at {site.location}')
        result = n.premises[0]
    assert result.conclusion == n.conclusion
    return put(p, site.location, result)


def find_extended_redexes(p: Proof) -> list[ExtendedRedex]:
    """Eliminations meeting their introduction across product eliminations and
    entropies only, top-down and left to right.

    A longer detour through other logical rules always contains one of these,
    which is what the rewrite steps act on.
    """
    found = []
    for path, n in walk(p):
        if n.rule not in PROD_ELIMS and n.rule not in IMP_ELIMS:
            continue
        interior, top = chain(p, path)
        intro = get(p, top)
        if intro.rule is not PARTNER[n.rule] or intro.rhs != n.premises[CARRIER[n.rule]].rhs:
            continue
        for step in interior:
            assert get(p, step).rule in PROD_ELIMS or get(p, step).rule is Rule.Entropy
        stuck = False
        if not interior:
            if n.rule in IMP_ELIMS:
                stuck = _opaque(intro, (intro.var,))
            else:
                stuck = _opaque(n.premises[1], n.pair)
        found.append(ExtendedRedex(path, top, len(interior), stuck, n.rule in IMP_ELIMS))
    return found


def _live(p: Proof) -> list[ExtendedRedex]:
    return [r for r in find_extended_redexes(p) if not r.stuck]


# ---------------------------------------------------------------- commutations

def raise_elim(p: Proof, at: Path) -> Proof:
    """Move the elimination at ``at`` above the product elimination or entropy
    concluding its formula-carrying premise; that rule ends up below it.
    """
    e = get(p, at)
    if e.rule not in IMP_ELIMS and e.rule not in PROD_ELIMS:
        raise NotApplicable(f'{e.rule.name} at {at} is not an elimination')
    c = CARRIER[e.rule]
    low = e.premises[c]
    if low.rule in PROD_ELIMS:
        lifted = rebuild(e, e.premises[:c] + (low.premises[1],) + e.premises[c + 1:])
        new = rebuild(low, (low.premises[0], lifted))
    elif low.rule is Rule.Entropy:
        lifted = rebuild(e, e.premises[:c] + (low.premises[0],) + e.premises[c + 1:])
        if not ctx.entropy_leq(e.lhs, lifted.lhs):
            raise NotApplicable('entropy does not commute here')
        new = Proof(Rule.Entropy, e.conclusion, (lifted,))
    else:
        raise NotApplicable(f'premise of {e.rule.name} at {at} is not a product elimination or entropy')
    assert new.conclusion == e.conclusion
    return put(p, at, new)


def raise_implicative_elim(p: Proof, at: Path) -> Proof:
    if get(p, at).rule not in IMP_ELIMS:
        raise NotApplicable(f'no implicative elimination at {at}')
    return raise_elim(p, at)


def _target_premise(n: Proof, pair: tuple[str, str]) -> int | None:
    for i, q in enumerate(n.premises):
        if set(pair) <= ctx.ids(q.lhs):
            return i
    return None


def raise_product_elim(p: Proof, at: Path) -> Proof:
    """Apply the product elimination at ``at`` inside the premise of the rule
    above it that holds both carved hypotheses.
    """
    r = get(p, at)
    if r.rule not in PROD_ELIMS:
        raise NotApplicable(f'no product elimination at {at}')
    upper = r.premises[1]
    if upper.rule in LEAVES:
        raise NotApplicable('nothing to rise over')
    i = _target_premise(upper, r.pair)
    if i is None:
        raise NotApplicable(f'{r.pair[0]} and {r.pair[1]} are split by {upper.rule.name}')
    try:
        inner = rebuild(r, (r.premises[0], upper.premises[i]))
        premises = upper.premises[:i] + (inner,) + upper.premises[i + 1:]
        if upper.rule is Rule.Entropy:
            if not ctx.entropy_leq(r.lhs, inner.lhs):
                raise NotApplicable('entropy no longer applies')
            new = Proof(Rule.Entropy, r.conclusion, premises)
        else:
            new = rebuild(upper, premises)
    except RuleViolation as e:
        raise NotApplicable(f'cannot rise over {upper.rule.name}: {e}') from None
    if new.conclusion != r.conclusion:
        raise NotApplicable(f'rising over {upper.rule.name} changes the conclusion')
    return put(p, at, new)


# ---------------------------------------------------------------- distances

class _Distances:
    """How far each product elimination still has to travel upwards, counted in
    rules that are not product eliminations.

    Climbing stops at a leaf, at a rule separating the two hypotheses, or in
    front of a premise the product elimination must not enter because that
    would lengthen an extended redex. When the climb passes or stops at another
    product elimination whose position is itself unsettled, that one's distance
    is added, since the path grows as it moves up.
    """

    def __init__(self, p: Proof):
        self.p = p
        self.memo: dict[Path, int] = {}
        self.direct: dict[Path, int] = {}
        found = find_extended_redexes(p)
        self.blocked = {r.elim for r in found}
        self.stuck = {r.elim for r in found if r.stuck}
        self.elims = [path for path, n in walk(p) if n.rule in PROD_ELIMS]

    def climb(self, at: Path) -> tuple[int, list[Path]]:
        r = get(self.p, at)
        mode = 'seq' if r.rule is Rule.OdotE else 'par'
        path, n = at + (1,), r.premises[1]
        direct, deps = 0, []
        while n.rule not in LEAVES:
            i = _target_premise(n, r.pair)
            blocked = i is not None and i == CARRIER.get(n.rule) and path in self.blocked
            stop = (i is None or blocked
                    or ctx.find_equiv_pair(n.premises[i].lhs, r.pair[0], r.pair[1], mode) is None
                    or (n.rule is Rule.Entropy and not self._entropy_ok(r, n)))
            if stop:
                # A live redex above is resolved before anything moves, so its
                # elimination's own travel only matters once it is stuck.
                if n.rule in PROD_ELIMS and (not blocked or path in self.stuck):
                    deps.append(path)
                break
            if n.rule in PROD_ELIMS:
                if i == 0:
                    # Entering the major premise of another product elimination
                    # is progress of its own: the pair is not yet as high as it goes.
                    direct += 1
                    deps.append(path)
            else:
                direct += 1
            path, n = path + (i,), n.premises[i]
        return direct, deps

    def _entropy_ok(self, r: Proof, n: Proof) -> bool:
        try:
            inner = rebuild(r, (r.premises[0], n.premises[0]))
        except RuleViolation:
            return False
        return ctx.entropy_leq(r.lhs, inner.lhs)

    def first_step(self, at: Path) -> int:
        if at not in self.direct:
            self.distance(at)
        return self.direct[at]

    def distance(self, at: Path) -> int:
        if at not in self.memo:
            direct, deps = self.climb(at)
            self.direct[at] = direct
            self.memo[at] = direct + sum(self.distance(d) for d in deps)
        return self.memo[at]

    def total(self) -> int:
        return sum(self.distance(at) for at in self.elims)


def d_conj(p: Proof, at: Path) -> int:
    return _Distances(p).distance(at)


def _raise_once(p: Proof, at: Path) -> tuple[Proof, Path]:
    """Raise the product elimination at ``at`` until it has passed one rule that
    is not a product elimination, or entered the major premise of one."""
    while True:
        r = get(p, at)
        upper = r.premises[1]
        i = _target_premise(upper, r.pair)
        p = raise_product_elim(p, at)
        at = at + (i,)
        if upper.rule not in PROD_ELIMS or i == 0:
            return p, at


# ---------------------------------------------------------------- measures

def _min_k(redexes: list[ExtendedRedex]) -> int:
    return min((r.k for r in redexes), default=0)


def is_lambek(p: Proof) -> bool:
    for _, n in walk(p):
        if n.rule not in LAMBEK_RULES or _has_par(n.lhs):
            return False
    return True


def _has_par(t) -> bool:
    if isinstance(t, Par):
        return True
    return isinstance(t, ctx.Seq) and any(_has_par(c) for c in t.children)


def measure_l(p: Proof) -> Measure:
    """<number of rules, total product distance, shortest extended redex>."""
    if not is_lambek(p):
        raise ValueError('not a proof of the Lambek calculus with product')
    return Measure(len(p), _Distances(p).total(), _min_k(_live(p)))


def measure_pcmll(p: Proof) -> Measure:
    """<number of rules, shortest implicative extended redex, shortest product extended redex>."""
    live = _live(p)
    imp = [r for r in live if r.implicative]
    prod = [r for r in live if not r.implicative]
    return Measure(len(p), _min_k(imp), _min_k(prod))


def measure(p: Proof, mode: str) -> Measure:
    return measure_l(p) if mode == 'lambek' else measure_pcmll(p)


# ---------------------------------------------------------------- strategy

@dataclass(frozen=True)
class Step:
    kind: str
    path: Path
    proof: Proof
    measure: Measure


def _order(path: Path) -> tuple:
    return len(path), path


def candidate_steps(p: Proof, mode: str) -> Iterator[tuple[str, Path, Callable[[], Proof]]]:
    """Every rewrite the normalizer may take from p, in no particular priority."""
    for site in find_redexes(p):
        if not site.stuck:
            yield f'contract-{site.kind.value}', site.location, (lambda s=site: contract(p, s))
    for r in find_extended_redexes(p):
        if r.k > 0:
            yield 'raise-elim', r.elim, (lambda at=r.elim: raise_elim(p, at))
    if mode == 'lambek':
        dist = _Distances(p)
        for at in dist.elims:
            if dist.first_step(at) > 0:
                yield 'raise-product', at, (lambda at=at: _raise_once(p, at)[0])


def next_step(p: Proof, mode: str) -> tuple[str, Path, Proof] | None:
    """The rewrite chosen by the deterministic strategy, or None on a normal proof."""
    for site in find_redexes(p):
        if not site.stuck:
            return f'contract-{site.kind.value}', site.location, contract(p, site)
    pending = [r for r in find_extended_redexes(p) if r.k > 0]
    if mode == 'pcmll':
        imp = [r for r in pending if r.implicative]
        pending = imp or pending
    if pending:
        r = min(pending, key=lambda r: (r.k, _order(r.elim)))
        return 'raise-elim', r.elim, raise_elim(p, r.elim)
    if mode == 'lambek':
        dist = _Distances(p)
        movable = [at for at in dist.elims if dist.first_step(at) > 0]
        if movable:
            at = min(movable, key=_order)
            return 'raise-product', at, _raise_once(p, at)[0]
    return None


@dataclass
class Normalization:
    proof: Proof
    steps: list[Step]
    complete: bool


def default_fuel(p: Proof) -> int:
    env = os.environ.get('PCMLL_FUEL')
    if env:
        return int(env)
    return 10 * len(p) ** 2


def run(p: Proof, mode: str = 'pcmll', fuel: int | None = None) -> Normalization:
    if mode not in ('lambek', 'pcmll'):
        raise ValueError(f'unknown mode {mode!r}')
    if mode == 'lambek' and not is_lambek(p):
        raise ValueError('lambek mode needs a proof of the Lambek calculus with product')
    fuel = default_fuel(p) if fuel is None else fuel
    steps: list[Step] = []
    while True:
        chosen = next_step(p, mode)
        if chosen is None:
            return Normalization(p, steps, True)
        if len(steps) >= fuel:
            return Normalization(p, steps, False)
        kind, path, p = chosen
        steps.append(Step(kind, path, p, measure(p, mode)))


def normalize(p: Proof, mode: str = 'pcmll', fuel: int | None = None) -> Proof:
    result = run(p, mode, fuel)
    if not result.complete:
        raise FuelExhausted(result.proof, len(result.steps))
    return result.proof


def is_normal(p: Proof, mode: str = 'pcmll') -> bool:
    return next_step(p, mode) is None


def format_path(path: Path) -> str:
    return '.'.join(map(str, path)) if path else 'root'


def format_trace(p: Proof, result: Normalization, mode: str) -> str:
    lines = [f'step 0: start at root measure {measure(p, mode)}']
    for i, s in enumerate(result.steps, 1):
        lines.append(f'step {i}: {s.kind} at {format_path(s.path)} measure {s.measure}')
    return '\n'.join(lines)


# ---------------------------------------------------------------- sub-formulas

@dataclass(frozen=True)
class Violation:
    path: Path
    formula: Formula


def check_subformula_property(p: Proof) -> list[Violation]:
    """Formulas that are neither sub-formulas of a hypothesis (open hypotheses
    and proper axioms) nor of the conclusion. Empty when the property holds.
    """
    allowed = set(subformulas(p.rhs))
    for o in ctx.occurrences(p.lhs):
        allowed |= subformulas(o.formula)
    for _, n in walk(p):
        if n.rule is Rule.ProperAxiom:
            allowed |= subformulas(n.rhs)
            for o in ctx.occurrences(n.lhs):
                allowed |= subformulas(o.formula)
    bad = []
    for path, n in walk(p):
        seen = [n.rhs] + [o.formula for o in ctx.occurrences(n.lhs)]
        for f in seen:
            if f not in allowed and Violation(path, f) not in bad:
                bad.append(Violation(path, f))
    return bad
