import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreclone import closures as C
from spreclone import finite_monoid as fm
from spreclone import galois as G
from spreclone import relations as R
from spreclone import signed_ops as so
from spreclone.errors import CapExceeded, Unsaturated

import oracles
from strategies import MONOIDS, s_relation, signed_op

Z2 = fm.builtin("z2")
SP = fm.builtin("sprime")
NOR = so.sheffer(2, 0)


def keys(ops):
    return {(f.signum, tuple(f.values)) for f in ops}


def test_multiplicity():
    assert C.multiplicity(Z2) == 1
    assert C.multiplicity(SP) == 2
    assert C.multiplicity(fm.builtin("shat")) == 3


def test_empty_generators_give_trivial_projections():
    frag = C.preclone_generate([], 3, Z2, 2)
    ops = frag.ops()
    assert all(so.is_trivial_projection(f, Z2) for f in ops)
    assert [frag.count(a) for a in (1, 2, 3)] == [1, 4, 12]
    assert frag.saturated_arities == (1, 2, 3)


def test_negation_minus(neg_minus):
    frag = C.preclone_generate([neg_minus], 2, Z2, 2)
    assert keys(frag.ops(1)) == {((0,), (0, 1)), ((1,), (1, 0))}


def test_sheffer_pair_generates_all_binary():
    frag = C.preclone_generate([NOR, so.identity(2, 1)], 2, Z2, 2)
    assert len(frag.ops()) == 72


def test_primitive_engine_matches_literal_oracle(neg_minus):
    and_ = so.from_function(2, (0, 1), lambda x, y: x & y)
    for F in ([], [neg_minus], [and_]):
        frag = C.preclone_generate(F, 2, Z2, 2, slack=0, method="primitive")
        want = oracles.preclone_closure(F, 2, Z2, 2)
        assert keys(frag.ops()) == want


@given(st.data())
@settings(max_examples=15, deadline=None)
def test_primitive_is_inside_superposition(data):
    m = MONOIDS[data.draw(st.sampled_from(["z2", "sprime"]))]
    F = [data.draw(signed_op(m, 2, 2)) for _ in range(data.draw(st.integers(1, 2)))]
    prim = C.preclone_generate(F, 2, m, 2, slack=1, method="primitive")
    sup = C.preclone_generate(F, 2, m, 2)
    assert keys(prim.ops()) <= keys(sup.ops())


@given(st.data())
@settings(max_examples=15, deadline=None)
def test_oracle_soundness_non_group(data):
    m = MONOIDS[data.draw(st.sampled_from(["sprime", "shat"]))]
    F = [data.draw(signed_op(m, 2, 2)) for _ in range(data.draw(st.integers(1, 2)))]
    frag = C.preclone_generate(F, 2, m, 2, slack=1)
    handle_cache = {}
    for f in frag.ops():
        assert G.membership(f, F, m, cache=handle_cache)


def test_fragment_closure_properties(neg_minus):
    frag = C.preclone_generate([neg_minus, NOR], 3, Z2, 2)
    have = keys(frag.ops())
    for f in frag.ops():
        for g in (so.zeta(f), so.tau(f), so.delta(f)):
            assert (g.signum, tuple(g.values)) in have
        if f.arity < 3:
            assert all((h.signum, tuple(h.values)) in have for h in (so.nabla(s, f) for s in range(2)))
    small = C.preclone_generate([neg_minus, NOR], 2, Z2, 2)
    again = C.preclone_generate(small.ops(), 2, Z2, 2)
    assert keys(again.ops()) == keys(small.ops())


def test_default_slack():
    assert C.default_op_slack(Z2, 2, 2) == 0
    assert C.default_op_slack(SP, 2, 2) == 1
    assert C.default_op_slack(SP, 2, 3) == 0
    assert C.default_op_slack(SP, 3, 1) == 0


def test_frame_cap():
    with pytest.raises(CapExceeded):
        C.preclone_generate([], 6, Z2, 2)


def test_theorem_one_examples(neg_minus):
    trivial = [so.identity(2, 0), so.projection(2, (0, 1), 0, Z2)]
    rep = C.verify_theorem_I(trivial, 2, Z2, 2)
    assert rep.ok and rep.per_arity[2]["oracle"] == 4
    rep = C.verify_theorem_I([neg_minus], 2, Z2, 2)
    assert rep.ok and not rep.oracle_not_gamma and not rep.gamma_not_oracle


@given(st.data())
@settings(max_examples=10, deadline=None)
def test_theorem_one_random(data):
    F = [data.draw(signed_op(Z2, 2, 2)) for _ in range(data.draw(st.integers(1, 3)))]
    assert C.verify_theorem_I(F, 3, Z2, 2).ok


def test_theorem_one_non_group_is_one_sided():
    F = [so.from_function(2, (1, 0), lambda x, y: x & y)]
    rep = C.verify_theorem_I(F, 2, SP, 2, slack=2)
    assert not rep.oracle_not_gamma
    assert rep.saturated_arities == (1, 2)
    assert rep.ok


def test_relclone_empty_is_diagonals():
    frag = C.relclone_generate([], 2, Z2, 2)
    want = [r for m in (1, 2) for r in C.s_diagonals_all(m, Z2, 2)]
    assert set(frag.members) == set(want)
    same = C.relclone_generate([R.delta_S(2, Z2)], 2, Z2, 2)
    assert same.members == frag.members


def test_relclone_contains_translation(leq_geq):
    frag = C.relclone_generate([leq_geq], 2, Z2, 2)
    assert R.mu(leq_geq, 1, Z2) in frag
    assert frag.saturated


def test_relclone_idempotent(leq_geq):
    frag = C.relclone_generate([leq_geq], 2, Z2, 2)
    again = C.relclone_generate(frag.members, 2, Z2, 2)
    assert again.members == frag.members


def test_relclone_invariant_under_spol(leq_geq):
    frag = C.relclone_generate([leq_geq], 2, SP, 2, slack=1)
    ops = G.spol([leq_geq], 2, SP, 2)
    for rho in frag.members:
        assert all(G.preserves(f, rho, SP) for f in ops)


def test_s_diagonals_examples():
    z2 = C.s_diagonals_all(2, Z2, 2)
    assert len(z2) == 3 and R.delta_S(2, Z2) in z2
    sp = C.s_diagonals_all(1, SP, 2)
    assert sorted(r.parts for r in sp) == [(0, 0), (3, 0), (3, 3)]
    for m in (1, 2, 3):
        for mon in (Z2, SP, fm.builtin("shat")):
            assert all(oracles.s_diagonal(r, mon) for r in C.s_diagonals_all(m, mon, 2))


def test_gamma_q():
    rho = R.s_relation(2, [[(0, 1)], []], 2)
    assert C.gamma_Q([], rho, Z2, 2) == R.full(2, 2, 2)
    d = R.delta_S(2, Z2)
    assert C.gamma_Q([], d, Z2, 2) == d
    frag = C.RelCloneFragment(2, Z2, 2, 0, (), False)
    with pytest.raises(Unsaturated):
        C.gamma_Q([], d, Z2, 2, fragment=frag)


@given(st.data())
@settings(max_examples=15, deadline=None)
def test_gamma_q_above(data):
    rho = data.draw(s_relation(Z2, 2, 2))
    q = [data.draw(s_relation(Z2, 2, arity=2))]
    g = C.gamma_Q(q, rho, Z2, 2, slack=1)
    assert rho.issubset(g)


def test_theorem_two_examples(leq_geq):
    rep = C.verify_theorem_II([], Z2, 2, 2, (1, 2))
    assert rep.ok and not rep.difference[2]
    rep = C.verify_theorem_II([leq_geq], Z2, 2, 2, (1, 2, 3))
    assert rep.ok and not rep.difference[3]
    everything = list(R.all_s_relations(2, 1, 2)) + list(R.all_s_relations(2, 2, 2))
    rep = C.verify_theorem_II(everything, Z2, 2, 2, (1,), slack=0)
    assert rep.ok and set(rep.r2[1]) == set(rep.r1)
