"""Meta-level reference for loop words, written without the kernel.

A loop word is a product of the generator ``loop`` and its inverse ``!loop``.
Its exponent sum is computed by free reduction in the free group on one
generator, so it never touches the evaluator.
"""
from __future__ import annotations

import random
import re

_LETTER = re.compile(r"\s*(!?)\s*loop\s*")


def letters(word: str) -> list[int]:
    """+1 for ``loop``, -1 for ``!loop``; ``refl`` is the empty word."""
    if word.strip() == "refl":
        return []
    out = []
    for part in word.split("*"):
        m = _LETTER.fullmatch(part)
        if not m:
            raise ValueError(f"not a loop word: {word!r}")
        out.append(-1 if m.group(1) else 1)
    return out


def free_reduce(xs: list[int]) -> list[int]:
    stack: list[int] = []
    for x in xs:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return stack


def exponent_sum(word: str) -> int:
    reduced = free_reduce(letters(word))
    # in the free group on one generator a reduced word is a pure power
    assert len(set(reduced)) <= 1
    return len(reduced) * (reduced[0] if reduced else 0)


def render(xs: list[int]) -> str:
    if not xs:
        return "refl"
    return " * ".join("loop" if x > 0 else "!loop" for x in xs)


def random_word(rng: random.Random, max_len: int) -> str:
    n = rng.randint(0, max_len)
    return render([rng.choice((1, -1)) for _ in range(n)])
