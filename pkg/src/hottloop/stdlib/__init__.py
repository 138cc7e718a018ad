"""The shipped ``.hott`` corpus and a loader that checks it in dependency order."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..checker import Environment, check_module
from ..syntax import parse_module

FILES = ("prelude.hott", "coprod_codes.hott", "integers.hott", "pi1s1.hott", "hedberg.hott")


def path(name: str) -> Path:
    """Filesystem path of a corpus file."""
    return Path(str(resources.files(__name__) / name))


def source(name: str) -> str:
    return (resources.files(__name__) / name).read_text(encoding="ascii")


def paths() -> list[Path]:
    return [path(f) for f in FILES]


def load(env: Environment | None = None, files=FILES) -> Environment:
    """Check ``files`` on top of ``env`` (a fresh kernel by default)."""
    env = env if env is not None else Environment.kernel()
    for f in files:
        env = check_module(env, parse_module(source(f), f), file=f)
    return env


@lru_cache(maxsize=1)
def _cached() -> Environment:
    return load()


def environment() -> Environment:
    """A private copy of the fully checked corpus environment."""
    return _cached().copy()
