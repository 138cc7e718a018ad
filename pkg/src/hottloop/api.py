"""High-level entry points: evaluate surface expressions, read integers, wind loops."""
from __future__ import annotations

import re

from . import core as c
from . import stdlib
from .checker import Environment, infer
from .normalizer import DEFAULT_BUDGET, EvalConfig, normalize
from .pretty import pretty_print
from .syntax import parse_term

_WORD = re.compile(r"\s*(refl|(?:!\s*)?loop(?:\s*\*\s*(?:!\s*)?loop)*)\s*")


def nat_to_term(n: int) -> c.Term:
    t: c.Term = c.NatZero()
    for _ in range(n):
        t = c.NatSucc(t)
    return t


def term_to_nat(t: c.Term) -> int | None:
    n = 0
    while isinstance(t, c.NatSucc):
        t, n = t.t, n + 1
    return n if isinstance(t, c.NatZero) else None


def int_to_term(n: int) -> c.Term:
    """The canonical ``Int`` normal form of ``n``."""
    if n < 0:
        return c.Inl(nat_to_term(-n - 1))
    if n == 0:
        return c.Inr(c.Inl(c.Star()))
    return c.Inr(c.Inr(nat_to_term(n - 1)))


def term_to_int(t: c.Term) -> int | None:
    """Inverse of :func:`int_to_term`; ``None`` if ``t`` is not canonical."""
    match t:
        case c.Inl(x):
            k = term_to_nat(x)
            return None if k is None else -k - 1
        case c.Inr(c.Inl(c.Star())):
            return 0
        case c.Inr(c.Inr(x)):
            k = term_to_nat(x)
            return None if k is None else k + 1
    return None


def word_to_path(word: str) -> str:
    """Turn a loop word such as ``"loop * !loop"`` into a surface path term."""
    m = _WORD.fullmatch(word)
    if not m:
        raise ValueError(f"malformed loop word {word!r}")
    body = m.group(1)
    return "refl S1 base" if body == "refl" else body


def evaluate(expr: str, env: Environment | None = None, compute_mode: bool = False,
             budget: int = DEFAULT_BUDGET, file: str = "<expr>") -> tuple[c.Term, c.Term]:
    """Elaborate ``expr`` and return its normal form and normalized type.

    Raises ``ParseError``, ``TypeCheckError`` or ``BudgetExceeded``.
    """
    env = env if env is not None else stdlib.environment()
    core, ty = infer(env, None, parse_term(expr, file))
    nf = normalize(core, globals_=env.globals, cfg=EvalConfig(compute_mode, budget))
    return nf, ty


def fold_type(ty: c.Term, env: Environment) -> c.Term:
    """Replace a type by the most recent global type it unfolds to, if any."""
    for gd in reversed(list(env.defs.values())):
        if gd.body is None or gd.type != c.Univ(0):
            continue
        if normalize(gd.body, globals_=env.globals) == ty:
            return c.Global(gd.name)
    return ty


def show_value(nf: c.Term, ty: c.Term, env: Environment) -> str:
    """``term : type``, with integers as signed decimals."""
    shown_ty = fold_type(ty, env)
    n = term_to_int(nf) if shown_ty == c.Global("Int") else None
    shown = pretty_print(nf) if n is None else f"{n:+d}" if n else "0"
    return f"{shown} : {pretty_print(shown_ty)}"


def winding(word: str, env: Environment | None = None, budget: int = DEFAULT_BUDGET) -> int:
    """Winding number of a loop word, computed by running ``encode`` in compute mode."""
    nf, _ = evaluate(f"encode base ({word_to_path(word)})", env, True, budget)
    n = term_to_int(nf)
    if n is None:
        raise ValueError(f"encode did not reach an integer: {pretty_print(nf)}")
    return n
