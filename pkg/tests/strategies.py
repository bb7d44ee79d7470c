from hypothesis import strategies as st

from spreclone import finite_monoid as fm
from spreclone import relations as R
from spreclone import signed_ops as so

MONOIDS = {name: fm.builtin(name) for name in fm.BUILTINS}


@st.composite
def signed_op(draw, monoid, k=2, max_arity=3, min_arity=1):
    n = draw(st.integers(min_arity, max_arity))
    sig = tuple(draw(st.integers(0, monoid.size - 1)) for _ in range(n))
    vals = draw(st.lists(st.integers(0, k - 1), min_size=k ** n, max_size=k ** n))
    return so.from_values(k, sig, vals)


@st.composite
def s_relation(draw, monoid, k=2, max_arity=2, arity=None):
    m = arity or draw(st.integers(1, max_arity))
    size = k ** m
    parts = tuple(draw(st.integers(0, (1 << size) - 1)) for _ in range(monoid.size))
    return R.SRelation(k, m, parts)


monoid_names = st.sampled_from(sorted(MONOIDS))
