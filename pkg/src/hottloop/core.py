"""Core term language: de Bruijn-indexed syntax, contexts, shifting and substitution.

Every node is an immutable dataclass.  Name hints and elaborator-inserted
annotations that are fully determined by the rest of the term are excluded
from equality, so ``==`` on two core terms is alpha-equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator


class ScopeError(Exception):
    """Internal invariant violation: an index escaped its scope."""


def _binder(default=None, **kw):
    return field(metadata={"binds": 1}, **kw) if default is None else field(default=default, metadata={"binds": 1}, **kw)


def _hint():
    return field(default="x", compare=False)


class Term:
    __slots__ = ()

    def __str__(self):  # pragma: no cover - debugging aid
        from .pretty import pretty_print

        return pretty_print(self)


# -- variables and globals ---------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Global(Term):
    name: str


# -- functions ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Lam(Term):
    body: Term = _binder()
    hint: str = _hint()


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Pi(Term):
    dom: Term
    cod: Term = _binder()
    hint: str = _hint()


# -- pairs -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True, slots=True)
class ProjL(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class ProjR(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class Sigma(Term):
    dom: Term
    cod: Term = _binder()
    hint: str = _hint()


# -- coproducts --------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Inl(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class Inr(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class SumTy(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class SumCase(Term):
    motive: Term
    on_l: Term
    on_r: Term
    scrut: Term


# -- naturals, unit, empty ---------------------------------------------------

@dataclass(frozen=True, slots=True)
class NatTy(Term):
    pass


@dataclass(frozen=True, slots=True)
class NatZero(Term):
    pass


@dataclass(frozen=True, slots=True)
class NatSucc(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class NatRec(Term):
    motive: Term
    z: Term
    s: Term
    scrut: Term


@dataclass(frozen=True, slots=True)
class UnitTy(Term):
    pass


@dataclass(frozen=True, slots=True)
class Star(Term):
    pass


@dataclass(frozen=True, slots=True)
class VoidTy(Term):
    pass


@dataclass(frozen=True, slots=True)
class VoidElim(Term):
    motive: Term
    scrut: Term


@dataclass(frozen=True, slots=True)
class Univ(Term):
    level: int


# -- identity types and path operators ---------------------------------------

@dataclass(frozen=True, slots=True)
class IdTy(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Refl(Term):
    ty: Term
    tm: Term


@dataclass(frozen=True, slots=True)
class J(Term):
    motive: Term
    on_refl: Term
    lhs: Term
    rhs: Term
    path: Term


@dataclass(frozen=True, slots=True)
class PathInv(Term):
    p: Term


@dataclass(frozen=True, slots=True)
class PathConcat(Term):
    p: Term
    q: Term


@dataclass(frozen=True, slots=True)
class Ap(Term):
    fn: Term
    p: Term
    # codomain of ``fn``; inserted by the elaborator, never written in source
    cod: Term = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Coe(Term):
    p: Term
    tm: Term


# -- the circle and univalence -----------------------------------------------

@dataclass(frozen=True, slots=True)
class S1Ty(Term):
    pass


@dataclass(frozen=True, slots=True)
class Base(Term):
    pass


@dataclass(frozen=True, slots=True)
class Loop(Term):
    pass


@dataclass(frozen=True, slots=True)
class S1Rec(Term):
    # the non-dependent target type; its universe is the elimination level
    motive: Term
    on_base: Term
    on_loop: Term


@dataclass(frozen=True, slots=True)
class S1Ind(Term):
    motive: Term
    on_base: Term
    on_loop: Term


@dataclass(frozen=True, slots=True)
class Ua(Term):
    equiv: Term
    # the type ``Equiv A B`` of ``equiv``; inserted by the elaborator
    ann: Term = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# generic traversal

_FIELD_CACHE: dict[type, tuple[tuple[str, int], ...]] = {}


def term_fields(cls: type) -> tuple[tuple[str, int], ...]:
    """(field name, binder count) for every sub-term field of ``cls``."""
    try:
        return _FIELD_CACHE[cls]
    except KeyError:
        out = tuple(
            (f.name, f.metadata.get("binds", 0))
            for f in fields(cls)
            if f.name not in ("hint", "index", "name", "level")
        )
        _FIELD_CACHE[cls] = out
        return out


def children(t: Term) -> Iterator[tuple[Term, int]]:
    for name, binds in term_fields(type(t)):
        c = getattr(t, name)
        if c is not None:
            yield c, binds


def map_term(t: Term, f: Callable[[Term, int], Term], depth: int = 0) -> Term:
    """Rebuild ``t`` with ``f(child, depth)`` applied to each direct child."""
    spec = term_fields(type(t))
    if not spec:
        return t
    changes = {}
    for name, binds in spec:
        c = getattr(t, name)
        if c is not None:
            changes[name] = f(c, depth + binds)
    return replace(t, **changes)


def size(t: Term) -> int:
    n = 1
    stack = [t]
    while stack:
        u = stack.pop()
        for c, _ in children(u):
            n += 1
            stack.append(c)
    return n


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        stack.extend(c for c, _ in children(u))


# ---------------------------------------------------------------------------
# shifting and substitution

def shift(t: Term, cutoff: int, amount: int) -> Term:
    """Displace every free index >= ``cutoff`` by ``amount``."""
    if amount == 0:
        return t

    def go(u: Term, c: int) -> Term:
        if isinstance(u, Var):
            if u.index < c:
                return u
            k = u.index + amount
            if k < 0:
                raise ScopeError(f"index {u.index} shifted by {amount} underflows")
            return Var(k)
        return map_term(u, go, c)

    return go(t, cutoff)


def subst(t: Term, index: int, replacement: Term) -> Term:
    """Replace ``Var(index)`` by ``replacement``; indices above it drop by one."""

    def go(u: Term, depth: int) -> Term:
        if isinstance(u, Var):
            k = index + depth
            if u.index == k:
                return shift(replacement, 0, depth)
            if u.index > k:
                return Var(u.index - 1)
            return u
        return map_term(u, go, depth)

    return go(t, 0)


def structural_eq(a: Term, b: Term) -> bool:
    return a == b


def free_indices(t: Term) -> set[int]:
    out: set[int] = set()

    def go(u: Term, depth: int) -> Term:
        if isinstance(u, Var):
            if u.index >= depth:
                out.add(u.index - depth)
            return u
        return map_term(u, go, depth)

    go(t, 0)
    return out


def globals_in(t: Term) -> set[str]:
    return {u.name for u in subterms(t) if isinstance(u, Global)}


# ---------------------------------------------------------------------------
# contexts

@dataclass(frozen=True)
class Context:
    """Telescope of typed assumptions; entry ``i`` from the end is ``Var(i)``."""

    entries: tuple[tuple[str, Term], ...] = ()

    def extend(self, name: str, ty: Term) -> "Context":
        return Context(self.entries + ((name, ty),))

    def lookup(self, index: int) -> tuple[str, Term]:
        if not 0 <= index < len(self.entries):
            raise ScopeError(f"index {index} not bound in a context of length {len(self.entries)}")
        name, ty = self.entries[-1 - index]
        # the stored type lives in the prefix; weaken it to the full context
        return name, shift(ty, 0, index + 1)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def __len__(self):
        return len(self.entries)


def is_well_scoped(t: Term, depth: int) -> bool:
    return all(i < depth for i in free_indices(t))
