"""Bidirectional elaboration of raw terms into fully annotated core terms.

Types are kept as values throughout; conversion is decided by the
normalizer in standard (non-compute) mode.  Eliminator motives are always
explicit, so the rules are syntax directed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import core as c
from .normalizer import DEFAULT_BUDGET, EvalConfig, Evaluator, Globals
from .pretty import pretty_print
from .syntax import (
    Decl, Diagnostic, RApp, RConcat, RInv, RKw, RLam, RPair, RPi, RSigma, RVar,
    RawTerm, Span, spine,
)
from .values import (
    FnClosure, NAbort, NApp, NAxiom, NCase, NFst, NJ, NNatRec, NS1Elim, NSnd,
    NVar, VId, VInl, VInr, VLoop, VNat, VPi, VRefl, VS1, VS1Rec, VBase, VSigma,
    VStar, VSucc, VSum, VUnit, VUniv, VVoid, VZero, Value,
)

log = logging.getLogger(__name__)

ARITY = {
    "U0": 0, "U1": 0, "Nat": 0, "zero": 0, "Unit": 0, "tt": 0, "Void": 0,
    "S1": 0, "base": 0, "loop": 0,
    "succ": 1, "inl": 1, "inr": 1, "fst": 1, "snd": 1, "ua": 1,
    "Sum": 2, "refl": 2, "coe": 2, "ap": 2, "abort": 2,
    "Id": 3, "S1rec": 3, "S1ind": 3,
    "natrec": 4, "case": 4,
    "J": 5,
}


class TypeCheckError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.format())
        self.diagnostic = diagnostic


class CheckFailed(Exception):
    """Raised by :func:`check_module` when any declaration fails."""

    def __init__(self, diagnostics: list[Diagnostic], env: "Environment"):
        super().__init__("\n".join(d.format() for d in diagnostics))
        self.diagnostics = diagnostics
        self.env = env


# ---------------------------------------------------------------------------
# environments and contexts


@dataclass
class GlobalDef:
    name: str
    type: c.Term
    body: c.Term | None  # None for kernel postulates
    type_value: Value | None = None


class Environment:
    """Checked global definitions, in the order they were added."""

    def __init__(self, allow_large_elim: bool = True):
        self.defs: dict[str, GlobalDef] = {}
        self.globals = Globals()
        self.poisoned: set[str] = set()
        self.allow_large_elim = allow_large_elim

    def copy(self) -> "Environment":
        out = Environment(self.allow_large_elim)
        out.defs = dict(self.defs)
        out.globals.bodies = dict(self.globals.bodies)
        out.globals._cache = dict(self.globals._cache)
        out.poisoned = set(self.poisoned)
        return out

    def add(self, name: str, ty: c.Term, body: c.Term | None) -> None:
        gd = GlobalDef(name, ty, body)
        gd.type_value = Evaluator(self.globals).eval((), ty)
        self.defs[name] = gd
        self.globals.define(name, body)

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def __len__(self) -> int:
        return len(self.defs)

    def names(self) -> list[str]:
        return list(self.defs)

    @classmethod
    def kernel(cls, allow_large_elim: bool = True) -> "Environment":
        env = cls(allow_large_elim)
        for name, ty in kernel_postulates():
            env.add(name, ty, None)
        return env


def kernel_postulates() -> list[tuple[str, c.Term]]:
    """Constants supplied by the kernel without a body.

    ``funext`` is needed for the loop case of ``decode`` (a path between
    functions); ``S1ind_loop_beta`` is the propositional loop rule of circle
    induction.  Neither computes.
    """
    V = c.Var
    U0 = c.Univ(0)
    # (A : U0) -> (B : A -> U0) -> (f g : (x : A) -> B x)
    #   -> ((x : A) -> Id (B x) (f x) (g x)) -> Id ((x : A) -> B x) f g
    funext = c.Pi(U0, c.Pi(c.Pi(V(0), U0, "x"),
        c.Pi(c.Pi(V(1), c.App(V(1), V(0)), "x"),
        c.Pi(c.Pi(V(2), c.App(V(2), V(0)), "x"),
        c.Pi(c.Pi(V(3), c.IdTy(c.App(V(3), V(0)), c.App(V(2), V(0)), c.App(V(1), V(0))), "x"),
             c.IdTy(c.Pi(V(4), c.App(V(4), V(0)), "x"), V(2), V(1)), "h"), "g"), "f"), "B"), "A")
    # (C : S1 -> U0) -> (b : C base) -> (l : Id (C base) (coe (ap C loop) b) b)
    #   -> Id (Id (C base) (coe (ap C loop) b) b) (apd C (S1ind C b l) loop) l
    C, b, l = V(2), V(1), V(0)
    over = c.IdTy(c.App(C, c.Base()), c.Coe(c.Ap(C, c.Loop(), U0), b), b)
    ind = c.S1Ind(C, b, l)
    # apd spelled out with J: J (\x y p. Id (C y) (coe (ap C p) (f x)) (f y)) (\x. refl (C x) (f x))
    sh = lambda t, k: c.shift(t, 0, k)
    apd_motive = c.Lam(c.Lam(c.Lam(c.IdTy(
        c.App(sh(C, 3), V(1)),
        c.Coe(c.Ap(sh(C, 3), V(0), U0), c.App(sh(ind, 3), V(2))),
        c.App(sh(ind, 3), V(1))), "p"), "y"), "x")
    apd_refl = c.Lam(c.Refl(c.App(sh(C, 1), V(0)), c.App(sh(ind, 1), V(0))), "x")
    apd = c.J(apd_motive, apd_refl, c.Base(), c.Base(), c.Loop())
    l_ty = c.IdTy(c.App(V(1), c.Base()), c.Coe(c.Ap(V(1), c.Loop(), U0), V(0)), V(0))
    beta = c.Pi(c.Pi(c.S1Ty(), U0, "x"),
                c.Pi(c.App(V(0), c.Base()),
                     c.Pi(l_ty, c.IdTy(over, apd, l), "l"), "b"), "C")
    return [("funext", funext), ("S1ind_loop_beta", beta)]


@dataclass(frozen=True)
class Ctx:
    """Local typing context: names, type values and the evaluation environment."""

    names: tuple[str, ...] = ()
    types: tuple[Value, ...] = ()
    env: tuple[Value, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.names)

    def bind(self, name: str, ty: Value) -> "Ctx":
        # unit eta: every variable of type Unit is definitionally tt
        v = VStar() if isinstance(ty, VUnit) else NVar(self.depth)
        return Ctx(self.names + (name,), self.types + (ty,), self.env + (v,))

    def lookup(self, name: str) -> tuple[int, Value] | None:
        for i in range(self.depth - 1, -1, -1):
            if self.names[i] == name:
                return self.depth - 1 - i, self.types[i]
        return None


# ---------------------------------------------------------------------------
# the checker


def _err(span: Span, msg: str, **kw) -> TypeCheckError:
    return TypeCheckError(Diagnostic.at(span, msg, **kw))


class Checker:
    def __init__(self, env: Environment, budget: int = DEFAULT_BUDGET,
                 trace: Callable[[Ctx, c.Term, Value, RawTerm], None] | None = None):
        self.env = env
        self.ev = Evaluator(env.globals, EvalConfig(False, budget))
        self.trace = trace

    # -- value helpers -------------------------------------------------------

    def eval(self, ctx: Ctx, t: c.Term) -> Value:
        return self.ev.eval(ctx.env, t)

    def quote(self, ctx: Ctx, v: Value) -> c.Term:
        return self.ev.readback(ctx.depth, v)

    def conv(self, ctx: Ctx, a: Value, b: Value) -> bool:
        return self.ev.conv(ctx.depth, a, b)

    def show(self, ctx: Ctx, v: Value) -> str:
        return pretty_print(self.quote(ctx, v), list(ctx.names))

    def inst(self, clo, v: Value) -> Value:
        return self.ev.apply_closure(clo, v)

    def const_pi(self, dom: Value, cod: Value, hint: str = "_") -> VPi:
        return VPi(dom, FnClosure(lambda _: cod), hint)

    def mismatch(self, ctx: Ctx, span: Span, expected: Value, actual: Value, what: str = "type mismatch"):
        return _err(span, what, expected=self.show(ctx, expected), actual=self.show(ctx, actual))

    def non_dependent(self, ctx: Ctx, clo, span: Span) -> tuple[c.Term, Value]:
        """Codomain of a closure that must not use its argument."""
        body = self.ev.readback(ctx.depth + 1, self.inst(clo, NVar(ctx.depth)))
        if 0 in c.free_indices(body):
            raise _err(span, "expected a non-dependent function")
        core = c.shift(body, 0, -1)
        return core, self.eval(ctx, core)

    def equiv_type(self, a: Value, b: Value) -> Value:
        app = self.ev.apply
        return VSigma(self.const_pi(a, b), FnClosure(lambda f: VSigma(
            self.const_pi(b, a), FnClosure(lambda g: VSigma(
                VPi(a, FnClosure(lambda x: VId(a, app(g, app(f, x)), x)), "x"),
                FnClosure(lambda _: VPi(b, FnClosure(lambda y: VId(b, app(f, app(g, y)), y)), "y")),
                "_")), "g")), "f")

    # -- universe levels -----------------------------------------------------

    def neutral_type(self, ctx: Ctx, v: Value) -> Value | None:
        ap = self.ev.apply
        match v:
            case NVar(level):
                return ctx.types[level] if level < ctx.depth else None
            case NAxiom(name):
                return self.env.defs[name].type_value
            case NApp(f, a):
                ft = self.neutral_type(ctx, f)
                return self.inst(ft.clo, a) if isinstance(ft, VPi) else None
            case NFst(p):
                pt = self.neutral_type(ctx, p)
                return pt.dom if isinstance(pt, VSigma) else None
            case NSnd(p):
                pt = self.neutral_type(ctx, p)
                return self.inst(pt.clo, self.ev.fst(p)) if isinstance(pt, VSigma) else None
            case NS1Elim(e, x):
                return e.motive if isinstance(e, VS1Rec) else ap(e.motive, x)
            case NCase(m, _, _, s) | NNatRec(m, _, _, s):
                return ap(m, s)
            case NAbort(m, _):
                return m
            case NJ(m, _, x, y, p):
                return ap(ap(ap(m, x), y), p)
        return None

    def type_level(self, ctx: Ctx, v: Value) -> int | None:
        match v:
            case VUniv(level):
                return level + 1
            case VNat() | VUnit() | VVoid() | VS1():
                return 0
            case VSum(a, b):
                la, lb = self.type_level(ctx, a), self.type_level(ctx, b)
                return None if la is None or lb is None else max(la, lb)
            case VId(a, _, _):
                return self.type_level(ctx, a)
            case VPi(dom, clo) | VSigma(dom, clo):
                ld = self.type_level(ctx, dom)
                inner = ctx.bind("_", dom)
                lc = self.type_level(inner, self.inst(clo, inner.env[-1]))
                return None if ld is None or lc is None else max(ld, lc)
        t = self.neutral_type(ctx, v)
        return t.level if isinstance(t, VUniv) else None

    # -- inference -----------------------------------------------------------

    def infer(self, ctx: Ctx, raw: RawTerm) -> tuple[c.Term, Value]:
        core, ty = self._infer(ctx, raw)
        if self.trace is not None:
            self.trace(ctx, core, ty, raw)
        return core, ty

    def infer_type(self, ctx: Ctx, raw: RawTerm) -> tuple[c.Term, int]:
        core, ty = self.infer(ctx, raw)
        if not isinstance(ty, VUniv):
            raise _err(raw.span, "expected a type", actual=self.show(ctx, ty))
        return core, ty.level

    def _infer(self, ctx: Ctx, raw: RawTerm) -> tuple[c.Term, Value]:
        match raw:
            case RVar(span, name):
                return self.infer_var(ctx, name, span)
            case RKw() | RApp():
                head, args = spine(raw)
                if isinstance(head, RKw):
                    n = ARITY[head.kw]
                    if len(args) < n:
                        raise _err(head.span, f"'{head.kw}' expects {n} argument{'s' if n != 1 else ''}, got {len(args)}")
                    core, ty = self.infer_prim(ctx, head, args[:n], raw.span)
                    return self.apply_args(ctx, core, ty, args[n:], head.span)
                if isinstance(head, RLam) and args:
                    core, ty = self.infer_redex(ctx, head, args[0])
                    return self.apply_args(ctx, core, ty, args[1:], head.span)
                core, ty = self.infer(ctx, head)
                return self.apply_args(ctx, core, ty, args, head.span)
            case RPi(span, name, dom, cod) | RSigma(span, name, dom, cod):
                d, ld = self.infer_type(ctx, dom)
                inner = ctx.bind(name or "_", self.eval(ctx, d))
                b, lb = self.infer_type(inner, cod)
                former = c.Pi if isinstance(raw, RPi) else c.Sigma
                return former(d, b, name or "_"), VUniv(max(ld, lb))
            case RPair(span, a, b):
                ca, ta = self.infer(ctx, a)
                cb, tb = self.infer(ctx, b)
                return c.Pair(ca, cb), VSigma(ta, FnClosure(lambda _: tb), "_")
            case RInv(span, p):
                cp, tp = self.infer(ctx, p)
                if not isinstance(tp, VId):
                    raise _err(p.span, "'!' expects a path", actual=self.show(ctx, tp))
                return c.PathInv(cp), VId(tp.ty, tp.rhs, tp.lhs)
            case RConcat(span, p, q):
                cp, tp = self.infer(ctx, p)
                if not isinstance(tp, VId):
                    raise _err(p.span, "'*' expects a path on the left", actual=self.show(ctx, tp))
                cq, tq = self.infer(ctx, q)
                if not isinstance(tq, VId):
                    raise _err(q.span, "'*' expects a path on the right", actual=self.show(ctx, tq))
                if not self.conv(ctx, tp.ty, tq.ty):
                    raise self.mismatch(ctx, q.span, tp.ty, tq.ty, "paths live in different types")
                if not self.conv(ctx, tp.rhs, tq.lhs):
                    raise self.mismatch(ctx, q.span, tp.rhs, tq.lhs, "path endpoints do not match")
                return c.PathConcat(cp, cq), VId(tp.ty, tp.lhs, tq.rhs)
            case RLam(span):
                raise _err(span, "annotation required: cannot infer the type of a lambda")
        raise _err(raw.span, f"cannot infer {type(raw).__name__}")

    def infer_var(self, ctx: Ctx, name: str, span: Span) -> tuple[c.Term, Value]:
        if name == "_":
            raise _err(span, "'_' cannot be used as a term")
        found = ctx.lookup(name)
        if found is not None:
            return c.Var(found[0]), found[1]
        if name in self.env.poisoned:
            raise _err(span, f"'{name}' refers to a declaration that failed to check")
        gd = self.env.defs.get(name)
        if gd is None:
            raise _err(span, f"unbound identifier '{name}'")
        return c.Global(name), gd.type_value

    def apply_args(self, ctx: Ctx, f: c.Term, ty: Value, args: list[RawTerm], span: Span):
        for a in args:
            if not isinstance(ty, VPi):
                raise _err(span, "expected a function", actual=self.show(ctx, ty))
            ca = self.check(ctx, a, ty.dom)
            f = c.App(f, ca)
            ty = self.inst(ty.clo, self.eval(ctx, ca))
        return f, ty

    def infer_redex(self, ctx: Ctx, lam: RLam, arg: RawTerm) -> tuple[c.Term, Value]:
        ca, ta = self.infer(ctx, arg)
        inner = ctx.bind(lam.name, ta)
        cb, tb = self.infer(inner, lam.body)
        tb_core = self.ev.readback(inner.depth, tb)
        ty = self.ev.eval(ctx.env + (self.eval(ctx, ca),), tb_core)
        return c.App(c.Lam(cb, lam.name), ca), ty

    def infer_lam_at(self, ctx: Ctx, lam: RLam, dom: Value) -> tuple[c.Term, c.Term, Value]:
        """Infer a lambda whose domain is known; its codomain must be constant."""
        inner = ctx.bind(lam.name, dom)
        cb, tb = self.infer(inner, lam.body)
        body = self.ev.readback(inner.depth, tb)
        if 0 in c.free_indices(body):
            raise _err(lam.span, "expected a non-dependent function")
        cod = c.shift(body, 0, -1)
        return c.Lam(cb, lam.name), cod, self.eval(ctx, cod)

    def check_family(self, ctx: Ctx, raw: RawTerm,
                     doms: list[Callable[[list[Value]], Value]]) -> tuple[c.Term, Value, int]:
        """Check a motive ``(x1 : D1) -> ... -> (xn : Dn) -> U_l``; return its level."""
        hints, vals = [], []
        inner, t = ctx, raw
        while len(vals) < len(doms) and isinstance(t, RLam):
            inner = inner.bind(t.name, doms[len(vals)](vals))
            vals.append(inner.env[-1])
            hints.append(t.name)
            t = t.body
        if len(vals) == len(doms):
            if isinstance(t, RLam):
                raise _err(t.span, f"motive has too many arguments (expected {len(doms)})")
            body, level = self.infer_type(inner, t)
        else:
            body, ty = self.infer(inner, t)
            c2 = inner
            for d in doms[len(vals):]:
                dv = d(vals)
                if not isinstance(ty, VPi):
                    raise _err(raw.span, "motive has too few arguments", expected=self.show(c2, dv))
                if not self.conv(c2, ty.dom, dv):
                    raise self.mismatch(c2, raw.span, dv, ty.dom, "motive has the wrong domain")
                c2 = c2.bind("_", dv)
                vals.append(c2.env[-1])
                ty = self.inst(ty.clo, c2.env[-1])
            if not isinstance(ty, VUniv):
                raise _err(raw.span, "motive must land in a universe", actual=self.show(c2, ty))
            level = ty.level
        for h in reversed(hints):
            body = c.Lam(body, h)
        if level >= 1 and not self.env.allow_large_elim:
            raise _err(raw.span, "large elimination (a motive into U1) is disabled")
        return body, self.eval(ctx, body), level

    def infer_prim(self, ctx: Ctx, head: RKw, args: list[RawTerm], span: Span) -> tuple[c.Term, Value]:
        kw = head.kw
        ev = self.ev
        match kw:
            case "U0":
                return c.Univ(0), VUniv(1)
            case "U1":
                raise _err(head.span, "U1 is the top universe and has no type")
            case "Nat":
                return c.NatTy(), VUniv(0)
            case "Unit":
                return c.UnitTy(), VUniv(0)
            case "Void":
                return c.VoidTy(), VUniv(0)
            case "S1":
                return c.S1Ty(), VUniv(0)
            case "zero":
                return c.NatZero(), VNat()
            case "tt":
                return c.Star(), VUnit()
            case "base":
                return c.Base(), VS1()
            case "loop":
                return c.Loop(), VId(VS1(), VBase(), VBase())
            case "succ":
                return c.NatSucc(self.check(ctx, args[0], VNat())), VNat()
            case "inl" | "inr":
                raise _err(head.span, f"annotation required: cannot infer the type of '{kw}'")
            case "fst" | "snd":
                cp, tp = self.infer(ctx, args[0])
                if not isinstance(tp, VSigma):
                    raise _err(args[0].span, f"'{kw}' expects a pair", actual=self.show(ctx, tp))
                if kw == "fst":
                    return c.ProjL(cp), tp.dom
                return c.ProjR(cp), self.inst(tp.clo, ev.fst(self.eval(ctx, cp)))
            case "ua":
                return self.infer_ua(ctx, args[0])
            case "Sum":
                a, la = self.infer_type(ctx, args[0])
                b, lb = self.infer_type(ctx, args[1])
                return c.SumTy(a, b), VUniv(max(la, lb))
            case "Id":
                a, la = self.infer_type(ctx, args[0])
                av = self.eval(ctx, a)
                x = self.check(ctx, args[1], av)
                y = self.check(ctx, args[2], av)
                return c.IdTy(a, x, y), VUniv(la)
            case "refl":
                a, _ = self.infer_type(ctx, args[0])
                av = self.eval(ctx, a)
                x = self.check(ctx, args[1], av)
                xv = self.eval(ctx, x)
                return c.Refl(a, x), VId(av, xv, xv)
            case "coe":
                cp, tp = self.infer(ctx, args[0])
                if not (isinstance(tp, VId) and isinstance(tp.ty, VUniv)):
                    raise _err(args[0].span, "'coe' expects a path between types", actual=self.show(ctx, tp))
                x = self.check(ctx, args[1], tp.lhs)
                return c.Coe(cp, x), tp.rhs
            case "ap":
                return self.infer_ap(ctx, args[0], args[1])
            case "abort":
                m, level = self.infer_type(ctx, args[0])
                if level >= 1 and not self.env.allow_large_elim:
                    raise _err(args[0].span, "large elimination (a motive into U1) is disabled")
                x = self.check(ctx, args[1], VVoid())
                return c.VoidElim(m, x), self.eval(ctx, m)
            case "S1rec":
                m, level = self.infer_type(ctx, args[0])
                if level >= 1 and not self.env.allow_large_elim:
                    raise _err(args[0].span, "large elimination (a motive into U1) is disabled")
                mv = self.eval(ctx, m)
                b = self.check(ctx, args[1], mv)
                bv = self.eval(ctx, b)
                lp = self.check(ctx, args[2], VId(mv, bv, bv))
                return c.S1Rec(m, b, lp), self.const_pi(VS1(), mv)
            case "S1ind":
                m, mv, level = self.check_family(ctx, args[0], [lambda vs: VS1()])
                base_ty = ev.apply(mv, VBase())
                b = self.check(ctx, args[1], base_ty)
                bv = self.eval(ctx, b)
                over = VId(base_ty, ev.coe(ev.ap(mv, VLoop(), VUniv(level)), bv), bv)
                lp = self.check(ctx, args[2], over)
                return c.S1Ind(m, b, lp), VPi(VS1(), FnClosure(lambda x: ev.apply(mv, x)), "x")
            case "natrec":
                n = self.check(ctx, args[3], VNat())
                m, mv, _ = self.check_family(ctx, args[0], [lambda vs: VNat()])
                z = self.check(ctx, args[1], ev.apply(mv, VZero()))
                step_ty = VPi(VNat(), FnClosure(
                    lambda k: self.const_pi(ev.apply(mv, k), ev.apply(mv, VSucc(k)))), "n")
                s = self.check(ctx, args[2], step_ty)
                return c.NatRec(m, z, s, n), ev.apply(mv, self.eval(ctx, n))
            case "case":
                cs, ts = self.infer(ctx, args[3])
                if not isinstance(ts, VSum):
                    raise _err(args[3].span, "'case' expects a value of a sum type", actual=self.show(ctx, ts))
                m, mv, _ = self.check_family(ctx, args[0], [lambda vs: ts])
                left = VPi(ts.left, FnClosure(lambda a: ev.apply(mv, VInl(a))), "a")
                right = VPi(ts.right, FnClosure(lambda b: ev.apply(mv, VInr(b))), "b")
                cl = self.check(ctx, args[1], left)
                cr = self.check(ctx, args[2], right)
                return c.SumCase(m, cl, cr, cs), ev.apply(mv, self.eval(ctx, cs))
            case "J":
                cp, tp = self.infer(ctx, args[4])
                if not isinstance(tp, VId):
                    raise _err(args[4].span, "'J' expects a path", actual=self.show(ctx, tp))
                a = tp.ty
                x = self.check(ctx, args[2], a)
                y = self.check(ctx, args[3], a)
                xv, yv = self.eval(ctx, x), self.eval(ctx, y)
                if not self.conv(ctx, xv, tp.lhs):
                    raise self.mismatch(ctx, args[2].span, tp.lhs, xv, "left endpoint does not match the path")
                if not self.conv(ctx, yv, tp.rhs):
                    raise self.mismatch(ctx, args[3].span, tp.rhs, yv, "right endpoint does not match the path")
                m, mv, _ = self.check_family(ctx, args[0], [
                    lambda vs: a, lambda vs: a, lambda vs: VId(a, vs[0], vs[1])])
                d_ty = VPi(a, FnClosure(
                    lambda z: ev.apply(ev.apply(ev.apply(mv, z), z), VRefl(a, z))), "x")
                d = self.check(ctx, args[1], d_ty)
                res = ev.apply(ev.apply(ev.apply(mv, xv), yv), self.eval(ctx, cp))
                return c.J(m, d, x, y, cp), res
        raise _err(head.span, f"unknown primitive '{kw}'")  # pragma: no cover

    def infer_ap(self, ctx: Ctx, fn: RawTerm, path: RawTerm) -> tuple[c.Term, Value]:
        cp, tp = self.infer(ctx, path)
        if not isinstance(tp, VId):
            raise _err(path.span, "'ap' expects a path", actual=self.show(ctx, tp))
        if isinstance(fn, RLam):
            cf, cod, codv = self.infer_lam_at(ctx, fn, tp.ty)
        else:
            cf, tf = self.infer(ctx, fn)
            if not isinstance(tf, VPi):
                raise _err(fn.span, "'ap' expects a function", actual=self.show(ctx, tf))
            if not self.conv(ctx, tf.dom, tp.ty):
                raise self.mismatch(ctx, path.span, tf.dom, tp.ty, "path does not lie in the function's domain")
            cod, codv = self.non_dependent(ctx, tf.clo, fn.span)
        fv = self.eval(ctx, cf)
        ap = self.ev.apply
        return c.Ap(cf, cp, cod), VId(codv, ap(fv, tp.lhs), ap(fv, tp.rhs))

    def infer_ua(self, ctx: Ctx, raw: RawTerm) -> tuple[c.Term, Value]:
        ce, te = self.infer(ctx, raw)
        if not (isinstance(te, VSigma) and isinstance(te.dom, VPi)):
            raise _err(raw.span, "'ua' expects an equivalence", actual=self.show(ctx, te))
        a = te.dom.dom
        _, b = self.non_dependent(ctx, te.dom.clo, raw.span)
        self.ua_ends(ctx, raw, a, b)
        want = self.equiv_type(a, b)
        if not self.conv(ctx, te, want):
            raise self.mismatch(ctx, raw.span, want, te, "'ua' expects an equivalence")
        return c.Ua(ce, self.quote(ctx, want)), VId(VUniv(0), a, b)

    def ua_ends(self, ctx: Ctx, raw: RawTerm, a: Value, b: Value) -> None:
        for side in (a, b):
            if self.type_level(ctx, side) != 0:
                raise _err(raw.span, "'ua' relates types in U0 only", actual=self.show(ctx, side))

    # -- checking ------------------------------------------------------------

    def check(self, ctx: Ctx, raw: RawTerm, ty: Value) -> c.Term:
        match raw:
            case RLam(span, name, body):
                if not isinstance(ty, VPi):
                    raise _err(span, "a lambda cannot have this type", expected=self.show(ctx, ty))
                inner = ctx.bind(name, ty.dom)
                return c.Lam(self.check(inner, body, self.inst(ty.clo, inner.env[-1])), name)
            case RPair(span, a, b):
                if not isinstance(ty, VSigma):
                    raise _err(span, "a pair cannot have this type", expected=self.show(ctx, ty))
                ca = self.check(ctx, a, ty.dom)
                cb = self.check(ctx, b, self.inst(ty.clo, self.eval(ctx, ca)))
                return c.Pair(ca, cb)
            case RApp(span):
                head, args = spine(raw)
                if isinstance(head, RKw):
                    kw = head.kw
                    if kw in ("inl", "inr") and len(args) == 1:
                        if not isinstance(ty, VSum):
                            raise _err(head.span, f"'{kw}' builds a sum, not this type", expected=self.show(ctx, ty))
                        if kw == "inl":
                            return c.Inl(self.check(ctx, args[0], ty.left))
                        return c.Inr(self.check(ctx, args[0], ty.right))
                    if kw == "ap" and len(args) == 2 and isinstance(args[0], RLam) and isinstance(ty, VId):
                        return self.check_ap(ctx, raw, args[0], args[1], ty)
                    if kw == "ua" and len(args) == 1 and isinstance(ty, VId) and isinstance(ty.ty, VUniv) and ty.ty.level == 0:
                        self.ua_ends(ctx, raw, ty.lhs, ty.rhs)
                        want = self.equiv_type(ty.lhs, ty.rhs)
                        return c.Ua(self.check(ctx, args[0], want), self.quote(ctx, want))
        core, actual = self.infer(ctx, raw)
        if not self.conv(ctx, actual, ty):
            raise self.mismatch(ctx, raw.span, ty, actual)
        return core

    def check_ap(self, ctx: Ctx, raw: RawTerm, fn: RLam, path: RawTerm, ty: VId) -> c.Term:
        cp, tp = self.infer(ctx, path)
        if not isinstance(tp, VId):
            raise _err(path.span, "'ap' expects a path", actual=self.show(ctx, tp))
        cf = self.check(ctx, fn, self.const_pi(tp.ty, ty.ty))
        fv = self.eval(ctx, cf)
        actual = VId(ty.ty, self.ev.apply(fv, tp.lhs), self.ev.apply(fv, tp.rhs))
        if not self.conv(ctx, actual, ty):
            raise self.mismatch(ctx, raw.span, ty, actual)
        return c.Ap(cf, cp, self.quote(ctx, ty.ty))

    # -- declarations --------------------------------------------------------

    def check_decl(self, decl: Decl) -> tuple[c.Term, c.Term]:
        ctx = Ctx()
        ty, _ = self.infer_type(ctx, decl.declared_type)
        body = self.check(ctx, decl.body, self.eval(ctx, ty))
        return ty, body


# ---------------------------------------------------------------------------
# module-level API


def _as_ctx(ctx: Ctx | c.Context | None, checker: Checker) -> Ctx:
    if ctx is None:
        return Ctx()
    if isinstance(ctx, Ctx):
        return ctx
    out = Ctx()
    for name, ty in ctx.entries:
        out = out.bind(name, checker.eval(out, ty))
    return out


def infer(env: Environment, ctx, t: RawTerm) -> tuple[c.Term, c.Term]:
    """Elaborate ``t`` and return (core term, normal form of its type)."""
    ch = Checker(env)
    cx = _as_ctx(ctx, ch)
    core, ty = ch.infer(cx, t)
    return core, ch.quote(cx, ty)


def check(env: Environment, ctx, t: RawTerm, against: c.Term) -> c.Term:
    ch = Checker(env)
    cx = _as_ctx(ctx, ch)
    return ch.check(cx, t, ch.eval(cx, against))


def convertible(env: Environment, ctx, a: c.Term, b: c.Term, budget: int = DEFAULT_BUDGET) -> bool:
    ch = Checker(env, budget)
    cx = _as_ctx(ctx, ch)
    return ch.conv(cx, ch.eval(cx, a), ch.eval(cx, b))


def check_module(env: Environment, decls: Iterable[Decl], file: str | None = None,
                 on_ok: Callable[[str], None] | None = None,
                 trace=None) -> Environment:
    """Check ``decls`` in order against a copy of ``env``.

    Every declaration is attempted; a failed one is poisoned so later uses of
    it report an error instead of cascading.  Raises :class:`CheckFailed`
    carrying all diagnostics and the partial environment.
    """
    env = env.copy()
    errors: list[Diagnostic] = []
    for decl in decls:
        if decl.name in env or decl.name in env.poisoned:
            sp = decl.name_span or decl.span
            errors.append(Diagnostic.at(sp, f"duplicate definition of '{decl.name}'"))
            continue
        try:
            ty, body = Checker(env, trace=trace).check_decl(decl)
        except TypeCheckError as e:
            errors.append(e.diagnostic)
            env.poisoned.add(decl.name)
            log.debug("declaration %s failed: %s", decl.name, e.diagnostic.message)
            continue
        env.add(decl.name, ty, body)
        if on_ok is not None:
            on_ok(decl.name)
    if errors:
        raise CheckFailed(errors, env)
    return env
