"""Semantic values produced by the evaluator.

Canonical forms, path values and closures live here; everything stuck on a
variable, an axiom, or an irreducible primitive application is a
:class:`Neutral`.  Neutral variables are de Bruijn *levels*.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import Term


class Value:
    __slots__ = ()


class Neutral(Value):
    __slots__ = ()


@dataclass(slots=True, eq=False)
class Closure:
    env: tuple
    body: Term


@dataclass(slots=True, eq=False)
class FnClosure:
    """Closure backed by a Python function; used when the checker builds types."""

    fn: Callable[[Value], Value]


# -- canonical forms ---------------------------------------------------------

@dataclass(slots=True, eq=False)
class VLam(Value):
    clo: Closure | FnClosure
    hint: str = "x"


@dataclass(slots=True, eq=False)
class VPi(Value):
    dom: Value
    clo: Closure | FnClosure
    hint: str = "x"


@dataclass(slots=True, eq=False)
class VSigma(Value):
    dom: Value
    clo: Closure | FnClosure
    hint: str = "x"


@dataclass(slots=True, eq=False)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(slots=True, eq=False)
class VInl(Value):
    v: Value


@dataclass(slots=True, eq=False)
class VInr(Value):
    v: Value


@dataclass(slots=True, eq=False)
class VSum(Value):
    left: Value
    right: Value


@dataclass(slots=True, eq=False)
class VNat(Value):
    pass


@dataclass(slots=True, eq=False)
class VZero(Value):
    pass


@dataclass(slots=True, eq=False)
class VSucc(Value):
    v: Value


@dataclass(slots=True, eq=False)
class VUnit(Value):
    pass


@dataclass(slots=True, eq=False)
class VStar(Value):
    pass


@dataclass(slots=True, eq=False)
class VVoid(Value):
    pass


@dataclass(slots=True, eq=False)
class VUniv(Value):
    level: int


@dataclass(slots=True, eq=False)
class VId(Value):
    ty: Value
    lhs: Value
    rhs: Value


@dataclass(slots=True, eq=False)
class VRefl(Value):
    ty: Value
    tm: Value


@dataclass(slots=True, eq=False)
class VS1(Value):
    pass


@dataclass(slots=True, eq=False)
class VBase(Value):
    pass


@dataclass(slots=True, eq=False)
class VLoop(Value):
    pass


@dataclass(slots=True, eq=False)
class VS1Rec(Value):
    motive: Value
    on_base: Value
    on_loop: Value


@dataclass(slots=True, eq=False)
class VS1Ind(Value):
    motive: Value
    on_base: Value
    on_loop: Value


@dataclass(slots=True, eq=False)
class VUa(Value):
    equiv: Value
    ann: Value | None = None


@dataclass(slots=True, eq=False)
class VInv(Value):
    p: Value


@dataclass(slots=True, eq=False)
class VConcat(Value):
    p: Value
    q: Value


# -- stuck forms -------------------------------------------------------------

@dataclass(slots=True, eq=False)
class NVar(Neutral):
    level: int


@dataclass(slots=True, eq=False)
class NAxiom(Neutral):
    name: str


@dataclass(slots=True, eq=False)
class NApp(Neutral):
    fun: Value
    arg: Value


@dataclass(slots=True, eq=False)
class NFst(Neutral):
    v: Value


@dataclass(slots=True, eq=False)
class NSnd(Neutral):
    v: Value


@dataclass(slots=True, eq=False)
class NCase(Neutral):
    motive: Value
    on_l: Value
    on_r: Value
    scrut: Value


@dataclass(slots=True, eq=False)
class NNatRec(Neutral):
    motive: Value
    z: Value
    s: Value
    scrut: Value


@dataclass(slots=True, eq=False)
class NAbort(Neutral):
    motive: Value
    scrut: Value


@dataclass(slots=True, eq=False)
class NJ(Neutral):
    motive: Value
    on_refl: Value
    lhs: Value
    rhs: Value
    path: Value


@dataclass(slots=True, eq=False)
class NS1Elim(Neutral):
    """A circle recursor/inductor applied to a point that is not ``base``."""

    elim: VS1Rec | VS1Ind
    point: Value


@dataclass(slots=True, eq=False)
class VAp(Neutral):
    fn: Value
    p: Value
    cod: Value


@dataclass(slots=True, eq=False)
class VCoe(Neutral):
    p: Value
    v: Value
