"""Pretty-printing core terms back to surface syntax with minimal parentheses."""
from __future__ import annotations

from . import core as c
from .syntax import RESERVED

# precedence levels, loosest first
TERM, PROD, BINOP, UNARY, APP, ATOM = range(6)

_NULLARY = {
    c.NatTy: "Nat", c.NatZero: "zero", c.UnitTy: "Unit", c.Star: "tt",
    c.VoidTy: "Void", c.S1Ty: "S1", c.Base: "base", c.Loop: "loop",
}

_PRIM_APPS = {
    c.NatSucc: ("succ", ("t",)),
    c.Inl: ("inl", ("t",)),
    c.Inr: ("inr", ("t",)),
    c.ProjL: ("fst", ("t",)),
    c.ProjR: ("snd", ("t",)),
    c.Ua: ("ua", ("equiv",)),
    c.SumTy: ("Sum", ("left", "right")),
    c.Refl: ("refl", ("ty", "tm")),
    c.Coe: ("coe", ("p", "tm")),
    c.Ap: ("ap", ("fn", "p")),
    c.VoidElim: ("abort", ("motive", "scrut")),
    c.IdTy: ("Id", ("ty", "lhs", "rhs")),
    c.S1Rec: ("S1rec", ("motive", "on_base", "on_loop")),
    c.S1Ind: ("S1ind", ("motive", "on_base", "on_loop")),
    c.NatRec: ("natrec", ("motive", "z", "s", "scrut")),
    c.SumCase: ("case", ("motive", "on_l", "on_r", "scrut")),
    c.J: ("J", ("motive", "on_refl", "lhs", "rhs", "path")),
}


_CHECK_ONLY = (c.Lam, c.Pair, c.Inl, c.Inr)


class _Printer:
    def __init__(self, avoid: set[str], ascribe: bool = False):
        self.avoid = avoid
        self.ascribe = ascribe

    def ascribed(self, t: c.Term, ty: c.Term, scope: list[str]) -> str:
        """``t`` wrapped in ``coe (refl U0 ty)`` so that it can be inferred."""
        return f"coe (refl U0 {self.go(ty, scope, ATOM)}) {self.go(t, scope, ATOM)}"

    def fresh(self, hint: str, scope: list[str]) -> str:
        base = hint if hint and hint != "_" and hint not in RESERVED else "x"
        name, k = base, 0
        while name in scope or name in self.avoid or name in RESERVED:
            k += 1
            name = f"{base}{k}"
        return name

    def bind(self, hint: str, body: c.Term, scope: list[str]) -> str:
        if 0 not in c.free_indices(body):
            return "_"
        return self.fresh(hint, scope)

    def go(self, t: c.Term, scope: list[str], prec: int) -> str:
        s, p = self.show(t, scope)
        return f"({s})" if p < prec else s

    def show(self, t: c.Term, scope: list[str]) -> tuple[str, int]:
        go = self.go
        cls = type(t)
        if cls in _NULLARY:
            return _NULLARY[cls], ATOM
        match t:
            case c.Ap(c.Lam(body, hint), p, cod) if self.ascribe and cod is not None \
                    and isinstance(body, _CHECK_ONLY):
                x = self.bind(hint, body, scope)
                inner = self.ascribed(body, c.shift(cod, 0, 1), scope + [x])
                return f"ap (\\{x}. {inner}) {go(p, scope, ATOM)}", APP
            case c.Ua(e, ann) if self.ascribe and ann is not None and isinstance(e, _CHECK_ONLY):
                return f"ua ({self.ascribed(e, ann, scope)})", APP
            case c.Var(i):
                if i < len(scope):
                    return scope[-1 - i], ATOM
                return f"#{i}", ATOM
            case c.Global(name):
                return name, ATOM
            case c.Univ(level):
                return f"U{level}", ATOM
            case c.Lam(body, hint):
                x = self.bind(hint, body, scope)
                return f"\\{x}. {go(body, scope + [x], TERM)}", TERM
            case c.Pi(dom, cod, hint) | c.Sigma(dom, cod, hint):
                arrow = "->" if isinstance(t, c.Pi) else "**"
                if 0 in c.free_indices(cod):
                    x = self.fresh(hint, scope)
                    return f"({x} : {go(dom, scope, TERM)}) {arrow} {go(cod, scope + [x], TERM)}", TERM
                body = c.shift(cod, 0, -1)
                if isinstance(t, c.Pi):
                    return f"{go(dom, scope, PROD)} -> {go(body, scope, TERM)}", TERM
                if isinstance(body, (c.Pi, c.Sigma)) and 0 in c.free_indices(body.cod):
                    # a dependent binder may follow '**' unparenthesised
                    rhs_s = go(body, scope, TERM)
                else:
                    rhs_s = go(body, scope, PROD)
                return f"{go(dom, scope, BINOP)} ** {rhs_s}", PROD
            case c.Pair(a, b):
                return f"<{go(a, scope, TERM)}, {go(b, scope, TERM)}>", ATOM
            case c.PathInv(p):
                return f"! {go(p, scope, UNARY)}", UNARY
            case c.PathConcat(p, q):
                return f"{go(p, scope, BINOP)} * {go(q, scope, UNARY)}", BINOP
            case c.App():
                head, args = t, []
                while isinstance(head, c.App):
                    args.append(head.arg)
                    head = head.fun
                args.reverse()
                parts = [go(head, scope, APP)] + [go(a, scope, ATOM) for a in args]
                return " ".join(parts), APP
        if cls in _PRIM_APPS:
            kw, names = _PRIM_APPS[cls]
            parts = [kw] + [go(getattr(t, n), scope, ATOM) for n in names]
            return " ".join(parts), APP
        raise TypeError(f"cannot print {t!r}")


def pretty_print(t: c.Term, ctx: c.Context | list[str] | None = None, ascribe: bool = False) -> str:
    """Render ``t`` in surface syntax; ``ctx`` supplies names for free variables.

    With ``ascribe`` set, the elaborator's hidden annotations are made visible
    where the printed term would otherwise not be inferable (the function of an
    ``ap`` whose body is a bare constructor, the argument of ``ua``).
    """
    if ctx is None:
        scope: list[str] = []
    elif isinstance(ctx, c.Context):
        scope = ctx.names
    else:
        scope = list(ctx)
    printer = _Printer(c.globals_in(t) | set(scope), ascribe)
    return printer.go(t, list(scope), TERM)
