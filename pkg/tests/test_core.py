import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hottloop import core as c
from hottloop.core import App, Base, Lam, Loop, NatZero, Var
from strategies import terms


def test_shift_examples():
    assert c.shift(Var(0), 0, 2) == Var(2)
    assert c.shift(Lam(Var(0)), 0, 5) == Lam(Var(0))
    assert c.shift(Lam(Var(3)), 0, 1) == Lam(Var(4))


def test_shift_underflow_is_an_error():
    with pytest.raises(c.ScopeError):
        c.shift(Var(0), 0, -1)


def test_subst_examples():
    assert c.subst(Var(0), 0, NatZero()) == NatZero()
    assert c.subst(App(Var(1), Var(0)), 1, Lam(Var(0))) == App(Lam(Var(0)), Var(0))
    assert c.subst(Lam(App(Var(1), Var(0))), 0, Base()) == Lam(App(Base(), Var(0)))


def test_subst_shifts_replacement_under_binders():
    # substituting a free variable under a lambda must not capture it
    assert c.subst(Lam(Var(1)), 0, Var(0)) == Lam(Var(1))


def test_structural_eq_ignores_hints():
    assert c.structural_eq(Lam(Var(0)), Lam(Var(0)))
    assert c.structural_eq(Lam(Var(0), "x"), Lam(Var(0), "y"))
    assert not c.structural_eq(Base(), Loop())


def test_ap_annotation_is_not_compared():
    assert c.Ap(Var(0), Loop(), c.NatTy()) == c.Ap(Var(0), Loop())


def test_free_indices_and_scope():
    t = Lam(App(Var(0), Var(2)))
    assert c.free_indices(t) == {1}
    assert c.is_well_scoped(t, 2) and not c.is_well_scoped(t, 1)


def test_context_lookup_weakens():
    ctx = c.Context().extend("A", c.Univ(0)).extend("a", Var(0))
    assert ctx.lookup(0) == ("a", Var(1))
    assert ctx.lookup(1) == ("A", c.Univ(0))
    with pytest.raises(c.ScopeError):
        ctx.lookup(2)


def test_terms_are_hashable_and_immutable():
    t = Lam(Var(0))
    assert {t: 1}[Lam(Var(0), "z")] == 1
    with pytest.raises(AttributeError):
        t.body = Base()


@given(terms, terms)
def test_subst_cancels_shift(t, u):
    assert c.subst(c.shift(t, 0, 1), 0, u) == t


@given(terms, st.integers(0, 3), st.integers(0, 4), st.integers(0, 4))
def test_shift_composes(t, cutoff, a, b):
    assert c.shift(c.shift(t, cutoff, a), cutoff, b) == c.shift(t, cutoff, a + b)


@given(terms, st.integers(0, 4))
def test_shift_then_unshift(t, a):
    assert c.shift(c.shift(t, 0, a), 0, -a) == t


@settings(max_examples=200)
@given(terms, terms, terms)
def test_structural_eq_is_an_equivalence(a, b, d):
    assert c.structural_eq(a, a)
    assert c.structural_eq(a, b) == c.structural_eq(b, a)
    if c.structural_eq(a, b) and c.structural_eq(b, d):
        assert c.structural_eq(a, d)


@given(terms, terms, st.integers(0, 2))
def test_subst_respects_structural_eq(t, u, k):
    renamed = c.map_term(t, lambda s, _: s)  # a structurally equal copy
    assert c.subst(t, k, u) == c.subst(renamed, k, u)


@given(terms)
def test_size_counts_subterms(t):
    assert c.size(t) == sum(1 for _ in c.subterms(t))
