"""Normalization by evaluation.

``Evaluator.eval`` turns core terms into values, firing every definitional
rule of the kernel:

* beta for functions, pairs, case, natrec; J on refl;
* refl units for path inverse, concatenation, ``ap`` and ``coe``;
* circle recursion/induction on ``base``;
* ``ap (S1rec C b l) loop = l``;
* ``coe (ua e) v = fst e v``.

With ``compute_mode`` on, the evaluator additionally pushes ``ap`` through
concatenation and inversion, drops ``ap`` of constant functions, and splits
``coe`` along composite and inverted paths.  These are the rules that turn a
closed loop into a winding number.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import core as c
from .values import (
    Closure, FnClosure, NAbort, NApp, NAxiom, NCase, NFst, NJ, NNatRec, NS1Elim,
    NSnd, NVar, Neutral, VAp, VBase, VCoe, VConcat, VId, VInl, VInr, VInv, VLam,
    VLoop, VNat, VPair, VPi, VRefl, VS1, VS1Ind, VS1Rec, VSigma, VStar, VSucc,
    VSum, VUa, VUnit, VUniv, VVoid, VZero, Value,
)

DEFAULT_BUDGET = 1_000_000
# level used for the probe variable when testing whether a function is constant
_PROBE_LEVEL = 1 << 40


class BudgetExceeded(Exception):
    def __init__(self, budget: int):
        super().__init__(f"normalization budget of {budget} rule firings exhausted")
        self.budget = budget


@dataclass(frozen=True)
class EvalConfig:
    compute_mode: bool = False
    step_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.step_budget <= 0:
            raise ValueError("step_budget must be positive")


class Globals:
    """Global definitions visible to the evaluator, with a per-mode value cache."""

    def __init__(self, bodies: Mapping[str, c.Term | None] | None = None):
        self.bodies: dict[str, c.Term | None] = dict(bodies or {})
        self._cache: dict[tuple[str, bool], Value] = {}

    def define(self, name: str, body: c.Term | None) -> None:
        self.bodies[name] = body

    def __contains__(self, name):
        return name in self.bodies


class Evaluator:
    def __init__(self, globals_: Globals | None = None, cfg: EvalConfig = EvalConfig()):
        self.globals = globals_ if globals_ is not None else Globals()
        self.cfg = cfg
        self.compute = cfg.compute_mode
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.cfg.step_budget:
            raise BudgetExceeded(self.cfg.step_budget)

    # -- evaluation ----------------------------------------------------------

    def eval(self, env: tuple, t: c.Term) -> Value:
        ev = self.eval
        match t:
            case c.Var(i):
                return env[-1 - i]
            case c.Global(name):
                return self.global_value(name)
            case c.Lam(body, hint):
                return VLam(Closure(env, body), hint)
            case c.App(f, a):
                return self.apply(ev(env, f), ev(env, a))
            case c.Pi(dom, cod, hint):
                return VPi(ev(env, dom), Closure(env, cod), hint)
            case c.Sigma(dom, cod, hint):
                return VSigma(ev(env, dom), Closure(env, cod), hint)
            case c.Pair(a, b):
                return VPair(ev(env, a), ev(env, b))
            case c.ProjL(p):
                return self.fst(ev(env, p))
            case c.ProjR(p):
                return self.snd(ev(env, p))
            case c.Inl(x):
                return VInl(ev(env, x))
            case c.Inr(x):
                return VInr(ev(env, x))
            case c.SumTy(a, b):
                return VSum(ev(env, a), ev(env, b))
            case c.SumCase(m, l, r, s):
                return self.case(ev(env, m), ev(env, l), ev(env, r), ev(env, s))
            case c.NatTy():
                return VNat()
            case c.NatZero():
                return VZero()
            case c.NatSucc(n):
                return VSucc(ev(env, n))
            case c.NatRec(m, z, s, n):
                return self.natrec(ev(env, m), ev(env, z), ev(env, s), ev(env, n))
            case c.UnitTy():
                return VUnit()
            case c.Star():
                return VStar()
            case c.VoidTy():
                return VVoid()
            case c.VoidElim(m, v):
                return NAbort(ev(env, m), ev(env, v))
            case c.Univ(level):
                return VUniv(level)
            case c.IdTy(a, x, y):
                return VId(ev(env, a), ev(env, x), ev(env, y))
            case c.Refl(a, x):
                return VRefl(ev(env, a), ev(env, x))
            case c.J(m, d, x, y, p):
                return self.j(ev(env, m), ev(env, d), ev(env, x), ev(env, y), ev(env, p))
            case c.PathInv(p):
                return self.inv(ev(env, p))
            case c.PathConcat(p, q):
                return self.concat(ev(env, p), ev(env, q))
            case c.Ap(f, p, cod):
                return self.ap(ev(env, f), ev(env, p), ev(env, cod) if cod is not None else None)
            case c.Coe(p, x):
                return self.coe(ev(env, p), ev(env, x))
            case c.S1Ty():
                return VS1()
            case c.Base():
                return VBase()
            case c.Loop():
                return VLoop()
            case c.S1Rec(m, b, l):
                return VS1Rec(ev(env, m), ev(env, b), ev(env, l))
            case c.S1Ind(m, b, l):
                return VS1Ind(ev(env, m), ev(env, b), ev(env, l))
            case c.Ua(e, ann):
                return VUa(ev(env, e), None if ann is None else ev(env, ann))
        raise TypeError(f"cannot evaluate {t!r}")

    def global_value(self, name: str) -> Value:
        key = (name, self.compute)
        cache = self.globals._cache
        v = cache.get(key)
        if v is None:
            body = self.globals.bodies[name]
            v = NAxiom(name) if body is None else self.eval((), body)
            cache[key] = v
        return v

    def apply_closure(self, clo, v: Value) -> Value:
        if isinstance(clo, Closure):
            return self.eval(clo.env + (v,), clo.body)
        return clo.fn(v)

    # -- eliminators ---------------------------------------------------------

    def apply(self, f: Value, a: Value) -> Value:
        if isinstance(f, VLam):
            self.tick()
            return self.apply_closure(f.clo, a)
        if isinstance(f, (VS1Rec, VS1Ind)):
            if isinstance(a, VBase):
                self.tick()
                return f.on_base
            return NS1Elim(f, a)
        if isinstance(f, Neutral):
            return NApp(f, a)
        raise TypeError(f"applying a non-function {type(f).__name__}")

    def fst(self, p: Value) -> Value:
        if isinstance(p, VPair):
            self.tick()
            return p.fst
        return NFst(p)

    def snd(self, p: Value) -> Value:
        if isinstance(p, VPair):
            self.tick()
            return p.snd
        return NSnd(p)

    def case(self, m: Value, l: Value, r: Value, s: Value) -> Value:
        if isinstance(s, VInl):
            self.tick()
            return self.apply(l, s.v)
        if isinstance(s, VInr):
            self.tick()
            return self.apply(r, s.v)
        return NCase(m, l, r, s)

    def natrec(self, m: Value, z: Value, s: Value, n: Value) -> Value:
        # iterate from the bottom so deep numerals do not recurse
        spine = []
        while isinstance(n, VSucc):
            spine.append(n.v)
            n = n.v
        if isinstance(n, VZero):
            acc = z
        else:
            acc = NNatRec(m, z, s, n)
        for k in reversed(spine):
            self.tick()
            acc = self.apply(self.apply(s, k), acc)
        return acc

    def j(self, m: Value, d: Value, x: Value, y: Value, p: Value) -> Value:
        if isinstance(p, VRefl):
            self.tick()
            return self.apply(d, x)
        return NJ(m, d, x, y, p)

    # -- path operators ------------------------------------------------------

    def inv(self, p: Value) -> Value:
        if isinstance(p, VRefl):
            self.tick()
            return p
        return VInv(p)

    def concat(self, p: Value, q: Value) -> Value:
        if isinstance(p, VRefl):
            self.tick()
            return q
        if isinstance(q, VRefl):
            self.tick()
            return p
        return VConcat(p, q)

    def ap(self, f: Value, p: Value, cod: Value) -> Value:
        if isinstance(p, VRefl):
            self.tick()
            return VRefl(cod, self.apply(f, p.tm))
        if isinstance(f, VS1Rec) and isinstance(p, VLoop):
            self.tick()
            return f.on_loop
        if self.compute:
            if isinstance(p, VConcat):
                self.tick()
                return self.concat(self.ap(f, p.p, cod), self.ap(f, p.q, cod))
            if isinstance(p, VInv):
                self.tick()
                return self.inv(self.ap(f, p.p, cod))
            const = self.constant_value(f)
            if const is not None:
                self.tick()
                return VRefl(cod, const)
        return VAp(f, p, cod)

    def coe(self, p: Value, v: Value) -> Value:
        if isinstance(p, VRefl):
            self.tick()
            return v
        if isinstance(p, VUa):
            self.tick()
            return self.apply(self.fst(p.equiv), v)
        if self.compute:
            if isinstance(p, VConcat):
                self.tick()
                return self.coe(p.q, self.coe(p.p, v))
            if isinstance(p, VInv):
                inner = p.p
                if isinstance(inner, VUa):
                    self.tick()
                    return self.apply(self.fst(self.snd(inner.equiv)), v)
                if isinstance(inner, VConcat):
                    self.tick()
                    return self.coe(self.inv(inner.p), self.coe(self.inv(inner.q), v))
                if isinstance(inner, VInv):
                    self.tick()
                    return self.coe(inner.p, v)
        return VCoe(p, v)

    def constant_value(self, f: Value) -> Value | None:
        """``f x`` when it does not depend on ``x``, else ``None``."""
        if not isinstance(f, VLam):
            return None
        probe = NVar(_PROBE_LEVEL)
        out = self.apply(f, probe)
        term = self.readback(_PROBE_LEVEL + 1, out)
        if 0 in c.free_indices(term):
            return None
        return out

    # -- readback ------------------------------------------------------------

    def readback(self, depth: int, v: Value) -> c.Term:
        rb = self.readback
        match v:
            case NVar(level):
                return c.Var(depth - level - 1)
            case NAxiom(name):
                return c.Global(name)
            case VLam(clo, hint):
                return c.Lam(rb(depth + 1, self.apply_closure(clo, NVar(depth))), hint)
            case VPi(dom, clo, hint):
                return c.Pi(rb(depth, dom), rb(depth + 1, self.apply_closure(clo, NVar(depth))), hint)
            case VSigma(dom, clo, hint):
                return c.Sigma(rb(depth, dom), rb(depth + 1, self.apply_closure(clo, NVar(depth))), hint)
            case VPair(a, b):
                return c.Pair(rb(depth, a), rb(depth, b))
            case VInl(x):
                return c.Inl(rb(depth, x))
            case VInr(x):
                return c.Inr(rb(depth, x))
            case VSum(a, b):
                return c.SumTy(rb(depth, a), rb(depth, b))
            case VNat():
                return c.NatTy()
            case VZero():
                return c.NatZero()
            case VSucc():
                k = 0
                while isinstance(v, VSucc):
                    v = v.v
                    k += 1
                out = rb(depth, v)
                for _ in range(k):
                    out = c.NatSucc(out)
                return out
            case VUnit():
                return c.UnitTy()
            case VStar():
                return c.Star()
            case VVoid():
                return c.VoidTy()
            case VUniv(level):
                return c.Univ(level)
            case VId(a, x, y):
                return c.IdTy(rb(depth, a), rb(depth, x), rb(depth, y))
            case VRefl(a, x):
                return c.Refl(rb(depth, a), rb(depth, x))
            case VS1():
                return c.S1Ty()
            case VBase():
                return c.Base()
            case VLoop():
                return c.Loop()
            case VS1Rec(m, b, l):
                return c.S1Rec(rb(depth, m), rb(depth, b), rb(depth, l))
            case VS1Ind(m, b, l):
                return c.S1Ind(rb(depth, m), rb(depth, b), rb(depth, l))
            case VUa(e, ann):
                return c.Ua(rb(depth, e), None if ann is None else rb(depth, ann))
            case VInv(p):
                return c.PathInv(rb(depth, p))
            case VConcat(p, q):
                return c.PathConcat(rb(depth, p), rb(depth, q))
            case NApp(f, a):
                return c.App(rb(depth, f), rb(depth, a))
            case NFst(p):
                return c.ProjL(rb(depth, p))
            case NSnd(p):
                return c.ProjR(rb(depth, p))
            case NCase(m, l, r, s):
                return c.SumCase(rb(depth, m), rb(depth, l), rb(depth, r), rb(depth, s))
            case NNatRec(m, z, s, n):
                return c.NatRec(rb(depth, m), rb(depth, z), rb(depth, s), rb(depth, n))
            case NAbort(m, x):
                return c.VoidElim(rb(depth, m), rb(depth, x))
            case NJ(m, d, x, y, p):
                return c.J(rb(depth, m), rb(depth, d), rb(depth, x), rb(depth, y), rb(depth, p))
            case NS1Elim(e, x):
                return c.App(rb(depth, e), rb(depth, x))
            case VAp(f, p, cod):
                return c.Ap(rb(depth, f), rb(depth, p), rb(depth, cod) if cod is not None else None)
            case VCoe(p, x):
                return c.Coe(rb(depth, p), rb(depth, x))
        raise TypeError(f"cannot read back {type(v).__name__}")

    # -- conversion ----------------------------------------------------------

    def conv(self, depth: int, a: Value, b: Value) -> bool:
        if a is b:
            return True
        if isinstance(a, VLam) or isinstance(b, VLam):
            x = NVar(depth)
            return self.conv(depth + 1, self.apply(a, x), self.apply(b, x))
        if isinstance(a, VPair) or isinstance(b, VPair):
            return (self.conv(depth, self.fst(a), self.fst(b))
                    and self.conv(depth, self.snd(a), self.snd(b)))
        if type(a) is not type(b):
            return False
        cv = self.conv
        match a:
            case NVar(level):
                return level == b.level
            case NAxiom(name):
                return name == b.name
            case VPi() | VSigma():
                if not cv(depth, a.dom, b.dom):
                    return False
                x = VStar() if isinstance(a.dom, VUnit) else NVar(depth)
                return cv(depth + 1, self.apply_closure(a.clo, x), self.apply_closure(b.clo, x))
            case VInl() | VInr():
                return cv(depth, a.v, b.v)
            case VSucc():
                while isinstance(a, VSucc) and isinstance(b, VSucc):
                    a, b = a.v, b.v
                return cv(depth, a, b)
            case VSum(l, r):
                return cv(depth, l, b.left) and cv(depth, r, b.right)
            case VNat() | VZero() | VUnit() | VStar() | VVoid() | VS1() | VBase() | VLoop():
                return True
            case VUniv(level):
                return level == b.level
            case VId(t, x, y):
                return cv(depth, t, b.ty) and cv(depth, x, b.lhs) and cv(depth, y, b.rhs)
            case VRefl(_, x):
                # the type of refl is fixed by the type both sides share
                return cv(depth, x, b.tm)
            case VS1Rec(m, x, l) | VS1Ind(m, x, l):
                return cv(depth, m, b.motive) and cv(depth, x, b.on_base) and cv(depth, l, b.on_loop)
            case VUa(e):
                return cv(depth, e, b.equiv)
            case VInv(p):
                return cv(depth, p, b.p)
            case VConcat(p, q):
                return cv(depth, p, b.p) and cv(depth, q, b.q)
            case NApp(f, x):
                return cv(depth, f, b.fun) and cv(depth, x, b.arg)
            case NFst(p) | NSnd(p):
                return cv(depth, p, b.v)
            case NCase(m, l, r, s):
                return (cv(depth, s, b.scrut) and cv(depth, l, b.on_l)
                        and cv(depth, r, b.on_r) and cv(depth, m, b.motive))
            case NNatRec(m, z, s, n):
                return (cv(depth, n, b.scrut) and cv(depth, z, b.z)
                        and cv(depth, s, b.s) and cv(depth, m, b.motive))
            case NAbort(m, x):
                return cv(depth, x, b.scrut) and cv(depth, m, b.motive)
            case NJ(m, d, x, y, p):
                return (cv(depth, p, b.path) and cv(depth, x, b.lhs) and cv(depth, y, b.rhs)
                        and cv(depth, d, b.on_refl) and cv(depth, m, b.motive))
            case NS1Elim(e, x):
                return cv(depth, x, b.point) and cv(depth, e, b.elim)
            case VAp(f, p, _):
                return cv(depth, p, b.p) and cv(depth, f, b.fn)
            case VCoe(p, x):
                return cv(depth, p, b.p) and cv(depth, x, b.v)
        raise TypeError(f"cannot compare {type(a).__name__}")


def eval_term(t: c.Term, env: tuple = (), globals_: Globals | None = None,
              cfg: EvalConfig = EvalConfig()) -> Value:
    return Evaluator(globals_, cfg).eval(env, t)


def readback(v: Value, depth: int = 0, globals_: Globals | None = None,
             cfg: EvalConfig = EvalConfig()) -> c.Term:
    return Evaluator(globals_, cfg).readback(depth, v)


def normalize(t: c.Term, depth: int = 0, globals_: Globals | None = None,
              cfg: EvalConfig = EvalConfig(), env: tuple | None = None) -> c.Term:
    """readback(eval(t)) in a context of ``depth`` free variables.

    Without an explicit ``env`` the free variables are bound to fresh neutrals.
    """
    ev = Evaluator(globals_, cfg)
    if env is None:
        env = tuple(NVar(i) for i in range(depth))
    return ev.readback(depth, ev.eval(env, t))


def rewrite_root(t: c.Term, rule: str) -> c.Term | None:
    """Fire one path rule at the root of ``t``; ``None`` if it does not apply.

    Used to drive critical-pair tests along a chosen rule order.
    """
    match rule, t:
        case "R3", c.Ap(f, c.Refl(_, x), cod):
            return c.Refl(cod, c.App(f, x))
        case "R3", c.Ap(f, c.PathConcat(c.Refl(), q), cod):
            return c.Ap(f, q, cod)
        case "R3", c.Ap(f, c.PathConcat(p, c.Refl()), cod):
            return c.Ap(f, p, cod)
        case "R3", c.Ap(f, c.PathInv(c.Refl(_, x)), cod):
            return c.Refl(cod, c.App(f, x))
        case "R3", c.PathConcat(c.Refl(), q):
            return q
        case "R3", c.PathConcat(p, c.Refl()):
            return p
        case "R3", c.PathInv(c.Refl() as r):
            return r
        case "R7", c.Ap(f, c.PathConcat(p, q), cod):
            return c.PathConcat(c.Ap(f, p, cod), c.Ap(f, q, cod))
        case "R7", c.Ap(f, c.PathInv(p), cod):
            return c.PathInv(c.Ap(f, p, cod))
    return None
