"""Series-parallel contexts of formula occurrences.

A context is an ordered multiset of hypotheses whose order is series-parallel:
``<a; b>`` puts ``a`` before ``b`` and ``(a, b)`` leaves them unordered.
Terms are kept canonical (flattened, singletons collapsed, parallel children
sorted), so two contexts denote the same partial order exactly when they are
equal as values.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .formula import Formula, TokenStream, format_formula, read_formula


@dataclass(frozen=True)
class Occurrence:
    id: str
    formula: Formula

    def __str__(self) -> str:
        return f'{self.id}:{format_formula(self.formula)}'


@dataclass(frozen=True)
class Leaf:
    occ: Occurrence


def _cached_hash(self) -> int:
    # Terms serve as cache keys throughout, so compound nodes remember their hash.
    h = self.__dict__.get('_hash')
    if h is None:
        h = hash((type(self).__name__, self.children))
        object.__setattr__(self, '_hash', h)
    return h


@dataclass(frozen=True)
class Seq:
    children: tuple[SpTerm, ...]
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Par:
    children: tuple[SpTerm, ...]
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class Empty:
    pass


HOLE = Hole()
EMPTY = Empty()

SpTerm = Union[Leaf, Seq, Par, Hole]
Context = Union[Leaf, Seq, Par, Hole, Empty]


class ContextError(ValueError):
    pass


def leaf(id: str, formula: Formula) -> Leaf:
    return Leaf(Occurrence(id, formula))


def seq(*parts: Context) -> Context:
    return canonicalize(Seq(tuple(parts)))


def par(*parts: Context) -> Context:
    return canonicalize(Par(tuple(parts)))


# ---------------------------------------------------------------- canonical form

def canonicalize(t: Context) -> Context:
    if isinstance(t, (Leaf, Hole, Empty)):
        return t
    kind = type(t)
    children = []
    for child in t.children:
        child = canonicalize(child)
        if isinstance(child, Empty):
            continue
        if type(child) is kind:
            children.extend(child.children)
        else:
            children.append(child)
    if not children:
        return EMPTY
    if len(children) == 1:
        return children[0]
    if kind is Par:
        children.sort(key=_sort_key)
    return kind(tuple(children))


def _sort_key(t: Context) -> tuple:
    if isinstance(t, Leaf):
        return (0, format_formula(t.occ.formula), t.occ.id)
    if isinstance(t, Hole):
        return (2,)
    return (1, format_context(t))


# ---------------------------------------------------------------- queries

def occurrences(t: Context) -> Iterator[Occurrence]:
    """Occurrences from left to right."""
    if isinstance(t, Leaf):
        yield t.occ
    elif isinstance(t, (Seq, Par)):
        for child in t.children:
            yield from occurrences(child)


def domain(t: Context) -> dict[str, Formula]:
    return {o.id: o.formula for o in occurrences(t)}


def ids(t: Context) -> frozenset[str]:
    return frozenset(o.id for o in occurrences(t))


def size(t: Context) -> int:
    return sum(1 for _ in occurrences(t))


def contains_hole(t: Context) -> bool:
    if isinstance(t, Hole):
        return True
    return isinstance(t, (Seq, Par)) and any(contains_hole(c) for c in t.children)


@lru_cache(maxsize=65536)
def id_pairs(t: Context) -> frozenset[tuple[str, str]]:
    """Strict order as pairs of occurrence ids ``(x, y)`` meaning x < y."""
    if not isinstance(t, (Seq, Par)):
        return frozenset()
    pairs = set()
    for child in t.children:
        pairs |= id_pairs(child)
    if isinstance(t, Seq):
        seen: list[str] = []
        for child in t.children:
            here = [o.id for o in occurrences(child)]
            pairs.update((x, y) for x in seen for y in here)
            seen.extend(here)
    return frozenset(pairs)


def order_pairs(t: Context) -> frozenset[tuple[Occurrence, Occurrence]]:
    occ = {o.id: o for o in occurrences(t)}
    return frozenset((occ[x], occ[y]) for x, y in id_pairs(t))


def entropy_leq(g2: Context, g1: Context) -> bool:
    """True when g2 has the hypotheses of g1 with a subset of its order constraints."""
    return _occurrence_set(g2) == _occurrence_set(g1) and id_pairs(g2) <= id_pairs(g1)


@lru_cache(maxsize=65536)
def _occurrence_set(t: Context) -> frozenset[Occurrence]:
    return frozenset(occurrences(t))


# ---------------------------------------------------------------- substitution

def substitute(hole_ctx: Context, delta: Context) -> Context:
    """Plug delta into the hole of hole_ctx."""
    clash = ids(hole_ctx) & ids(delta)
    if clash:
        raise ContextError(f'occurrence ids used twice: {sorted(clash)}')
    if not contains_hole(hole_ctx):
        raise ContextError('context has no hole')
    return canonicalize(_plug(hole_ctx, delta))


def _plug(t: Context, delta: Context) -> Context:
    if isinstance(t, Hole):
        return delta
    if isinstance(t, (Seq, Par)):
        return type(t)(tuple(_plug(c, delta) for c in t.children))
    return t


def punch(t: Context, id: str) -> Context:
    """Replace the leaf carrying occurrence ``id`` by the hole."""
    if isinstance(t, Leaf):
        return HOLE if t.occ.id == id else t
    if isinstance(t, (Seq, Par)):
        return type(t)(tuple(punch(c, id) for c in t.children))
    return t


def replace(t: Context, id: str, delta: Context) -> Context:
    """Substitute delta for the occurrence ``id``."""
    if id not in ids(t):
        raise ContextError(f'no occurrence {id} in {format_context(t)}')
    rest = punch(t, id)
    clash = ids(rest) & ids(delta)
    if clash:
        raise ContextError(f'occurrence ids used twice: {sorted(clash)}')
    return canonicalize(_plug(rest, delta))


def remove(t: Context, id: str) -> Context:
    return replace(t, id, EMPTY)


def _id(x: Occurrence | str) -> str:
    return x if isinstance(x, str) else x.id


def equivalent(t: Context, a: Occurrence | str, b: Occurrence | str) -> bool:
    """Every other hypothesis sits on the same side of a as of b."""
    a, b = _id(a), _id(b)
    pairs = id_pairs(t)
    for x in ids(t) - {a, b}:
        if ((x, a) in pairs) != ((x, b) in pairs) or ((a, x) in pairs) != ((b, x) in pairs):
            return False
    return True


def find_equiv_pair(t: Context, a: Occurrence | str, b: Occurrence | str, mode: str) -> Context | None:
    """Hole context left after carving out ``<a; b>`` (mode 'seq') or ``(a, b)`` (mode 'par')."""
    a, b = _id(a), _id(b)
    if a == b or not {a, b} <= ids(t):
        return None
    pairs = id_pairs(t)
    if mode == 'seq':
        if (a, b) not in pairs:
            return None
    elif mode == 'par':
        if (a, b) in pairs or (b, a) in pairs:
            return None
    else:
        raise ValueError(f'unknown mode {mode!r}')
    if not equivalent(t, a, b):
        return None
    return _carve(t, a, b, mode)


def _is_leaf(t: Context, id: str) -> bool:
    return isinstance(t, Leaf) and t.occ.id == id


def _carve(t: Context, a: str, b: str, mode: str) -> Context | None:
    if isinstance(t, Leaf) or not isinstance(t, (Seq, Par)):
        return None
    kids = t.children
    if mode == 'seq' and isinstance(t, Seq):
        for i in range(len(kids) - 1):
            if _is_leaf(kids[i], a) and _is_leaf(kids[i + 1], b):
                return canonicalize(Seq(kids[:i] + (HOLE,) + kids[i + 2:]))
    if mode == 'par' and isinstance(t, Par):
        here = [i for i, k in enumerate(kids) if _is_leaf(k, a) or _is_leaf(k, b)]
        if len(here) == 2:
            rest = tuple(k for i, k in enumerate(kids) if i not in here)
            return canonicalize(Par(rest + (HOLE,)))
    for i, child in enumerate(kids):
        inner = _carve(child, a, b, mode)
        if inner is not None:
            return canonicalize(type(t)(kids[:i] + (inner,) + kids[i + 1:]))
    return None


# ---------------------------------------------------------------- text syntax

def format_context(t: Context) -> str:
    match t:
        case Leaf(occ):
            return str(occ)
        case Seq(children):
            return '<' + '; '.join(format_context(c) for c in children) + '>'
        case Par(children):
            return '(' + ', '.join(format_context(c) for c in children) + ')'
        case Hole():
            return '[]'
        case Empty():
            return ''
    raise TypeError(f'not a context: {t!r}')


def parse_context(text: str) -> Context:
    s = TokenStream(text)
    t = read_context(s)
    if s.peek.kind != 'end':
        s.error('trailing input')
    return t


def read_context(s: TokenStream) -> Context:
    """Read a possibly empty context; stops before any token that cannot start one."""
    if s.peek.kind != 'ident' and not s.at('<', '(', '['):
        return EMPTY
    return canonicalize(_read_item(s))


def _read_item(s: TokenStream) -> Context:
    if s.at('['):
        s.next()
        s.expect(']')
        return HOLE
    for open_, sep, close, kind in (('<', ';', '>', Seq), ('(', ',', ')', Par)):
        if s.at(open_):
            s.next()
            items = [_read_item(s)]
            while s.at(sep):
                s.next()
                items.append(_read_item(s))
            s.expect(close)
            return kind(tuple(items))
    name = s.ident()
    s.expect(':')
    return Leaf(Occurrence(name, read_formula(s)))
