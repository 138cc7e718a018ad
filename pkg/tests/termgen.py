"""Random closed surface terms over the standard library, with meta-level meanings.

Each generator returns ``(text, value)``: ``value`` is the integer a term of
type Int or Nat denotes, or the winding number of a loop.  Values are computed
here by plain arithmetic, independently of the kernel.
"""
from __future__ import annotations

import random


class TermGen:
    def __init__(self, rng: random.Random, max_depth: int = 4):
        self.rng = rng
        self.max_depth = max_depth

    def pick(self, depth, leaves, nodes):
        options = leaves if depth >= self.max_depth else leaves + nodes
        return self.rng.choice(options)(depth + 1)

    def int_(self, d: int = 0) -> tuple[str, int]:
        i, p, n = self.int_, self.path, self.nat
        return self.pick(d, [
            lambda d: ("zeroInt", 0),
            lambda d: ("posSucc zero", 1),
            lambda d: ("negSucc (succ zero)", -2),
        ], [
            lambda d: (lambda a: (f"succInt ({a[0]})", a[1] + 1))(i(d)),
            lambda d: (lambda a: (f"predInt ({a[0]})", a[1] - 1))(i(d)),
            lambda d: (lambda a: (f"negInt ({a[0]})", -a[1]))(i(d)),
            lambda d: (lambda a: (f"fst succEquiv ({a[0]})", a[1] + 1))(i(d)),
            lambda d: (lambda a: (f"fst (snd succEquiv) ({a[0]})", a[1] - 1))(i(d)),
            lambda d: (lambda a: (f"coe (ua succEquiv) ({a[0]})", a[1] + 1))(i(d)),
            lambda d: (lambda a: (f"encode base ({a[0]})", a[1]))(p(d)),
            lambda d: (lambda a: (f"winding ({a[0]})", a[1]))(p(d)),
            lambda d: (lambda a, b: (f"transport S1 Cover base base ({a[0]}) ({b[0]})", a[1] + b[1]))(p(d), i(d)),
            lambda d: (lambda a, b: (f"coe (ap Cover ({a[0]})) ({b[0]})", a[1] + b[1]))(p(d), i(d)),
            lambda d: (lambda a, b: (f"natrec (\\_. Int) ({a[0]}) (\\k. \\r. succInt r) ({b[0]})", a[1] + b[1]))(i(d), n(d)),
            lambda d: (lambda a: (f"(\\x. predInt (succInt x)) ({a[0]})", a[1]))(i(d)),
        ])

    def nat(self, d: int = 0) -> tuple[str, int]:
        n = self.nat
        return self.pick(d, [
            lambda d: ("zero", 0),
            lambda d: ("succ (succ zero)", 2),
        ], [
            lambda d: (lambda a: (f"succ ({a[0]})", a[1] + 1))(n(d)),
            lambda d: (lambda a: (f"fst <{a[0]}, base>", a[1]))(n(d)),
            lambda d: (lambda a, b: (f"natrec (\\_. Nat) ({a[0]}) (\\k. \\r. succ r) ({b[0]})", a[1] + b[1]))(n(d), n(d)),
        ])

    def path(self, d: int = 0) -> tuple[str, int]:
        p, i = self.path, self.int_
        return self.pick(d, [
            lambda d: ("loop", 1),
            lambda d: ("refl S1 base", 0),
            lambda d: ("! loop", -1),
        ], [
            lambda d: (lambda a: (f"! ({a[0]})", -a[1]))(p(d)),
            lambda d: (lambda a, b: (f"({a[0]}) * ({b[0]})", a[1] + b[1]))(p(d), p(d)),
            lambda d: (lambda a: (f"loopPow ({a[0]})", a[1]))(i(d)),
            lambda d: (lambda a: (f"decode base ({a[0]})", a[1]))(i(d)),
            lambda d: (lambda a: (f"fst (snd omega1_equiv_int) ({a[0]})", a[1]))(i(d)),
            lambda d: (lambda a, b: (f"ap (S1rec S1 base ({a[0]})) ({b[0]})", a[1] * b[1]))(p(d), p(d)),
        ])

    def any(self) -> tuple[str, str, int]:
        kind = self.rng.choice(["Int", "Int", "Nat", "Omega"])
        text, value = {"Int": self.int_, "Nat": self.nat, "Omega": self.path}[kind]()
        return kind, text, value
