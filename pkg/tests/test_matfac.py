"""Tests for graded matrix factorizations, hom dimensions, and ext tables."""

import json
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmskit.exactmat import Poly, parse_poly_string
from hmskit.grading import GradingContext, lbar_representatives, m_grading
from hmskit.polyforms import parse_model
from hmskit.quivercat import dynkin_quiver, simple_hom_dims, tensor_model
from hmskit.matfac import (
    ExtTable,
    MFError,
    ResourceLimitError,
    ext_table,
    ext_table_to_json,
    generator_collection,
    generator_E,
    hom_dim,
    koszul_mf,
    mf_from_pair,
    mf_to_json,
    monomials_of_degree,
    one_period_end_total,
    residue_mf_D,
    shift_mf,
    tensor_mf,
    translate_mf,
    unit_mf,
)

from oracle_homs import oracle_hom_dim


def _model(name):
    return parse_model(name)


def _twist(ctx, t):
    return ctx.element(t, (0,) * len(ctx.torsion))


def _rank_one_objects(name):
    # the two objects cut out by a variable and its cofactor
    p = _model(name)
    labels = [lab for lab, _ in generator_collection(p)]
    return p, generator_collection(p), labels


# ---------------------------------------------------------------- construction


def test_pair_factorization_has_forced_labels():
    p = _model("D4t")
    y = Poly.variable(2, 1)
    cof = parse_poly_string("x^3 + y", 2)
    k = mf_from_pair(p.ctx, p.poly, y, cof)
    assert [e.key() for e in k.p0] == [((0,), ())]
    assert [e.key() for e in k.p1] == [((3,), ())]
    k.validate()

    shifted = mf_from_pair(p.ctx, p.poly, y, cof, shift=_twist(p.ctx, -2))
    assert [e.key() for e in shifted.p0] == [((-2,), ())]
    assert [e.key() for e in shifted.p1] == [((1,), ())]


def test_pair_factorization_rejects_bad_products():
    p = _model("D4t")
    y = Poly.variable(2, 1)
    with pytest.raises(MFError, match="does not equal the potential"):
        mf_from_pair(p.ctx, p.poly, y, y)
    with pytest.raises(MFError, match="does not equal the potential"):
        mf_from_pair(p.ctx, p.poly, Poly.zero(2), y)


def test_residue_field_family():
    for n in range(3, 7):
        k = residue_mf_D(n)
        assert [e.key() for e in k.p1] == [((-1,), ()), ((-n + 1,), ())]
        assert [e.key() for e in k.p0] == [((-n,), ()), ((-2 * n + 2,), ())]
        assert k.d0 == k.d1
        k.validate()
    with pytest.raises(MFError, match="needs n >= 3"):
        residue_mf_D(2)


def test_koszul_of_chain_atom_is_a_shifted_pair():
    # one monomial in one variable: the Koszul construction collapses to
    # the (x, x^m) pair placed so that both label solutions agree
    for name, m in (("A1", 1), ("A2", 2), ("A4", 4)):
        p = _model(name)
        k = koszul_mf(p)
        x = Poly.variable(1, 0)
        pair = mf_from_pair(p.ctx, p.poly, x, Poly.monomial(1, (m,)))
        assert k.same_data(shift_mf(pair, _twist(p.ctx, -1)))


def test_koszul_canonical_splitting():
    p = _model("D4t")
    k = koszul_mf(p)
    data = k.koszul_data
    assert [e.format() for e in data.eta] == ["x", "y"]
    assert [g.format() for g in data.gamma] == ["x^2*y", "y"]
    assert data.form_basis == [(), (0,), (1,), (0, 1)]
    assert [s.key() for s in data.shift_solution] == [((0,), ()), ((0,), ()), ((6,), ())]
    assert [e.key() for e in k.p0] == [((-1,), ()), ((-3,), ())]
    assert [e.key() for e in k.p1] == [((0,), ()), ((2,), ())]
    assert [[q.format() for q in row] for row in k.d0] == [["x", "y"], ["-y", "x^2*y"]]
    assert [[q.format() for q in row] for row in k.d1] == [["x^2*y", "-y"], ["y", "x"]]
    # eta.gamma recovers the potential
    acc = Poly.zero(2)
    for e, g in zip(data.eta, data.gamma):
        acc = acc + e * g
    assert acc == p.poly


def test_koszul_splitting_can_be_steered():
    p = _model("D4t")
    k = koszul_mf(p, gamma_choice={(3, 1): 1})
    gamma = k.koszul_data.gamma
    assert gamma[0].is_zero()
    assert gamma[1] == parse_poly_string("x^3 + y", 2)
    k.validate()

    with pytest.raises(MFError, match="not in W"):
        koszul_mf(p, gamma_choice={(1, 1): 0})
    with pytest.raises(MFError, match="does not divide"):
        koszul_mf(p, gamma_choice={(0, 2): 0})


def test_koszul_agrees_with_residue_family_up_to_signed_swap():
    # same object, different basis: reversing the odd summands and negating
    # both differentials carries one presentation to the other
    p = _model("D4t")
    k = koszul_mf(p)
    t = translate_mf(residue_mf_D(4, ctx=p.ctx))
    assert list(k.p0) == list(t.p0)
    assert [k.p1[1], k.p1[0]] == list(t.p1)
    swap_rows = [[-q for q in t.d0[1]], [-q for q in t.d0[0]]]
    swap_cols = [[-row[1], -row[0]] for row in t.d1]
    assert [list(r) for r in k.d0] == swap_rows
    assert [list(r) for r in k.d1] == swap_cols


def test_rank_two_context_is_rejected_by_hom():
    ctx2 = GradingContext([[1, 0], [0, 1]], [], [], [[1, 0], [0, 1]], [2, 0])
    w = Poly.monomial(2, (2, 0))
    x = Poly.variable(2, 0)
    k = mf_from_pair(ctx2, w, x, x)
    with pytest.raises(MFError, match="free rank must be one"):
        hom_dim(k, k, 0)


# ---------------------------------------------------------------- shifts


def test_shift_and_translate_algebra():
    p = _model("D4t")
    ctx = p.ctx
    k = residue_mf_D(4, ctx=ctx)
    s = shift_mf(k, _twist(ctx, 5))
    assert [e.key() for e in s.p1] == [((4,), ()), ((2,), ())]
    t2 = translate_mf(translate_mf(k))
    assert t2.same_data(shift_mf(k, ctx.deg_c))
    # translate swaps the summands and shifts the new odd part by c
    t = translate_mf(k)
    assert list(t.p0) == list(k.p1)
    assert [e.key() for e in t.p1] == [(e + ctx.deg_c).key() for e in k.p0]


@given(st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=25, deadline=None)
def test_shifts_compose_additively(a, b):
    p = _model("A2")
    k = koszul_mf(p)
    one = shift_mf(shift_mf(k, _twist(p.ctx, a)), _twist(p.ctx, b))
    both = shift_mf(k, _twist(p.ctx, a + b))
    assert one.same_data(both)


# ---------------------------------------------------------------- tensor


def test_unit_object_is_a_tensor_identity():
    u = unit_mf()
    p = _model("A2")
    k = koszul_mf(p)
    right = tensor_mf(k, u)
    left = tensor_mf(u, k)
    assert right.ctx == k.ctx and left.ctx == k.ctx
    assert right.same_data(k)
    assert left.same_data(k)


def test_tensor_of_rank_one_factors():
    p = _model("A1+A1")
    a1 = _model("A1")
    x = Poly.variable(1, 0)
    f = mf_from_pair(a1.ctx, a1.poly, x, x)
    prod = tensor_mf(f, f)
    assert prod.rank0 == 2 and prod.rank1 == 2
    prod.validate()
    assert prod.ctx.torsion == (2,)
    # same folded endomorphism count as the direct two-variable model
    gens = [shift_mf(prod, r) for r in lbar_representatives(prod.ctx)]
    assert one_period_end_total(gens) == 16
    k = koszul_mf(p)
    alt = [shift_mf(k, r) for r in lbar_representatives(k.ctx)]
    assert one_period_end_total(alt) == 16


# ---------------------------------------------------------------- hom dims


def test_self_hom_of_rank_one_object_is_one_dimensional():
    _, col, labels = _rank_one_objects("D4t")
    x1 = col[0][1]
    assert labels[0] == "R/(y)"
    assert hom_dim(x1, x1, 0) == 1
    assert hom_dim(x1, x1, 1) == 0


def test_chain_model_hom_lines():
    # two-periodic single line: nonzero exactly on t = -k, always dimension 1
    a1 = _model("A1")
    x = Poly.variable(1, 0)
    y = mf_from_pair(a1.ctx, a1.poly, x, x)
    got = sorted(
        (t, k)
        for t in range(-5, 6)
        for k in range(-4, 5)
        if hom_dim(y, shift_mf(y, _twist(a1.ctx, t)), k)
    )
    assert got == [(t, k) for (t, k) in got if t == -k]
    assert got == sorted((-k, k) for k in range(-4, 5))

    a2 = _model("A2")
    z = mf_from_pair(a2.ctx, a2.poly, Poly.variable(1, 0), Poly.monomial(1, (2,)))
    got2 = sorted(
        (t, k)
        for t in range(-6, 7)
        for k in range(-4, 5)
        if hom_dim(z, shift_mf(z, _twist(a2.ctx, t)), k)
    )
    want2 = sorted(
        set((-3 * a, 2 * a) for a in range(-2, 3))
        | set((-1 - 3 * a, 1 + 2 * a) for a in range(-3, 3))
    )
    want2 = [(t, k) for (t, k) in want2 if -6 <= t <= 6 and -4 <= k <= 4]
    assert got2 == want2


def test_two_variable_model_hom_lines():
    p, col, _ = _rank_one_objects("D4t")
    ctx = p.ctx
    x1, x2, s0 = col[0][1], col[1][1], col[2][1]

    def box(a, b):
        return set(
            (t, k)
            for t in range(-8, 9)
            for k in range(-4, 5)
            if hom_dim(a, shift_mf(b, _twist(ctx, t)), k)
        )

    lo, hi = -8, 8
    inside = lambda pts: set((t, k) for t, k in pts if lo <= t <= hi and -4 <= k <= 4)

    assert box(x1, s0) == inside((3 * (1 - k), k) for k in range(-8, 9))
    assert box(s0, x1) == inside((-3 * k - 1, k) for k in range(-8, 9))
    # odd-degree triples between the two rank-one objects
    assert box(x1, x2) == inside(
        (t, 2 * j + 1) for j in range(-3, 4) for t in (-6 * j - 1, -6 * j - 2, -6 * j - 3)
    )
    assert box(s0, s0) == inside(
        set((t, 2 * j) for j in range(-3, 4) for t in (-6 * j, -6 * j + 2))
        | set((t, 2 * j + 1) for j in range(-3, 4) for t in (-6 * j - 1, -6 * j - 3))
    )
    assert box(x1, x1) == inside(
        (t, 2 * j) for j in range(-3, 4) for t in (-6 * j, -6 * j + 1, -6 * j + 2)
    )


def test_hom_dims_are_two_periodic():
    p, col, _ = _rank_one_objects("D4t")
    ctx = p.ctx
    for _, a in col:
        for _, b in col:
            for k in (-2, -1, 0, 1):
                assert hom_dim(a, b, k) == hom_dim(a, shift_mf(b, -ctx.deg_c), k + 2)


def test_hom_dims_match_independent_oracle():
    p, col, _ = _rank_one_objects("D4t")
    ctx = p.ctx
    pts = [(0, 0, 2, 0), (0, 2, 0, 1), (2, 0, -1, 0), (2, 2, -6, 2), (1, 2, -2, 1)]
    for i, j, t, k in pts:
        a, b = col[i][1], shift_mf(col[j][1], _twist(ctx, t))
        assert hom_dim(a, b, k) == oracle_hom_dim(a, b, k)

    s = _model("A2+A2")
    gens = generator_E(s)
    for a, b, k in [(gens[0], gens[0], 0), (gens[0], gens[4], 0), (gens[0], gens[1], 1)]:
        assert hom_dim(a, b, k) == oracle_hom_dim(a, b, k)


def test_hom_rejects_mismatched_potentials():
    d = koszul_mf(_model("D4t"))
    a = koszul_mf(_model("A2"))
    with pytest.raises(MFError, match="different gradings"):
        hom_dim(d, a, 0)


def test_hom_window_argument_is_vestigial():
    _, col, _ = _rank_one_objects("D4t")
    x1 = col[0][1]
    assert hom_dim(x1, x1, 0, window=1) == hom_dim(x1, x1, 0)


# ---------------------------------------------------------------- monomials


def test_monomials_by_degree():
    p = _model("D4t")
    got = [monomials_of_degree(p.ctx, _twist(p.ctx, d)) for d in range(7)]
    assert got == [
        ((0, 0),),
        ((1, 0),),
        ((2, 0),),
        ((0, 1), (3, 0)),
        ((1, 1), (4, 0)),
        ((2, 1), (5, 0)),
        ((0, 2), (3, 1), (6, 0)),
    ]


def test_monomials_see_torsion_classes():
    s = _model("A1+A1")
    ctx = s.ctx
    assert monomials_of_degree(ctx, ctx.element(1, (0,))) == ((1, 0),)
    assert monomials_of_degree(ctx, ctx.element(1, (1,))) == ((0, 1),)
    assert monomials_of_degree(ctx, ctx.element(2, (0,))) == ((0, 2), (2, 0))
    assert monomials_of_degree(ctx, ctx.element(2, (1,))) == ((1, 1),)


# ---------------------------------------------------------------- ext tables


def test_ext_table_of_a_single_pair():
    a1 = _model("A1")
    x = Poly.variable(1, 0)
    tab = ext_table([mf_from_pair(a1.ctx, a1.poly, x, x)], 0)
    assert tab.objects == ("O1",)
    assert tab.dims == {(0, 0, 0): 1}
    assert tab.total() == 1

    empty = ext_table([], 2)
    assert empty.entries() == []


def _table_matches_quiver(name, window=4):
    p = _model(name)
    col = generator_collection(p)
    tab = ext_table(col, window)
    q = dynkin_quiver(p.atoms[0])
    for i in range(len(col)):
        for j in range(len(col)):
            for k in range(-window, window + 1):
                if tab.dim(i, j, k) != simple_hom_dims(q, i, j, k):
                    return False
    return True


def test_chain_collections_match_their_quivers():
    for name in ("A1", "A2", "A3", "A4", "A5"):
        assert _table_matches_quiver(name)


def test_two_variable_collections_match_their_quivers():
    for name in ("D4t", "D5t", "D6t"):
        assert _table_matches_quiver(name)


def test_sum_collections_match_the_tensor_table():
    for name in ("A1+A1", "A2+A2"):
        p = _model(name)
        col = generator_collection(p)
        tab = ext_table(col, 4)
        model = tensor_model([dynkin_quiver(a) for a in p.atoms])
        for i in range(len(col)):
            for j in range(len(col)):
                for k in range(-4, 5):
                    assert tab.dim(i, j, k) == model.dim(i, j, k)


def test_ext_table_is_thread_deterministic():
    _, col, _ = _rank_one_objects("D4t")
    one = ext_table(col, 3)
    four = ext_table(col, 3, threads=4)
    assert one.objects == four.objects
    assert one.dims == four.dims


def test_ext_table_rejects_mixed_potentials():
    a = koszul_mf(_model("A2"))
    b = koszul_mf(_model("A3"))
    with pytest.raises(MFError):
        ext_table([a, b], 1)


def test_cell_limit_raises_resource_error():
    _, col, _ = _rank_one_objects("D4t")
    with pytest.raises(ResourceLimitError, match="above the limit"):
        ext_table(col, 3, max_cells=2)
    assert issubclass(ResourceLimitError, RuntimeError)


# ---------------------------------------------------------------- generators


def test_generator_collection_labels():
    assert [l for l, _ in generator_collection(_model("D4t"))] == [
        "R/(y)",
        "R/(x^3+y)",
        "R/m(0)",
        "R/m(-1)",
    ]
    assert [l for l, _ in generator_collection(_model("A2"))] == ["R/m(0)", "R/m(-1)"]
    assert [l for l, _ in generator_collection(_model("A1+A1"))] == ["R/m(0)|R/m(0)"]
    with pytest.raises(MFError, match="transpose the polynomial first"):
        generator_collection(_model("D5"))


def test_generator_orbit_for_chain_atom():
    p = _model("A2")
    gens = generator_E(p)
    base = mf_from_pair(p.ctx, p.poly, Poly.variable(1, 0), Poly.monomial(1, (2,)))
    reps = lbar_representatives(p.ctx)
    assert len(gens) == len(reps) == 3
    for g, r in zip(gens, reps):
        assert g.same_data(shift_mf(base, r))


def test_generator_orbit_for_two_variable_atom():
    p = _model("D4t")
    gens = generator_E(p)
    base = residue_mf_D(4, ctx=p.ctx)
    reps = lbar_representatives(p.ctx)
    assert len(gens) == len(reps) == 6
    for g, r in zip(gens, reps):
        assert g.same_data(shift_mf(base, r))


def test_generator_orbit_for_sums():
    gens = generator_E(_model("A2+A2"))
    assert len(gens) == 9
    base = gens[0]
    assert all(g.ctx == base.ctx for g in gens)
    with pytest.raises(MFError, match="transpose the polynomial first"):
        generator_E(_model("D4"))


def test_one_period_totals_multiply_over_sums():
    singles = {"A1": 4, "A2": 6, "A3": 8, "D4t": 24}
    for name, want in singles.items():
        assert one_period_end_total(generator_E(_model(name))) == want
    assert one_period_end_total(generator_E(_model("A1+A1")), threads=2) == 16
    assert one_period_end_total(generator_E(_model("A2+A2")), threads=2) == 36


def test_one_period_total_needs_a_twist_orbit():
    _, col, _ = _rank_one_objects("D4t")
    with pytest.raises(MFError, match="not twists of a single object"):
        one_period_end_total([m for _, m in col[:2]])
    with pytest.raises(MFError, match="edge of the folding window"):
        one_period_end_total(generator_E(_model("A2")), periods=0)


# ---------------------------------------------------------------- serialization


def test_json_shapes_are_stable():
    a1 = _model("A1")
    x = Poly.variable(1, 0)
    k = mf_from_pair(a1.ctx, a1.poly, x, x)
    assert json.dumps(mf_to_json(k), sort_keys=True) == (
        '{"d0": [["x"]], "d1": [["x"]], "p0": [0], "p1": [1], "w": "x^2"}'
    )

    _, col, _ = _rank_one_objects("D4t")
    tab = ext_table(col[:2], 1)
    assert json.dumps(ext_table_to_json(tab), sort_keys=True) == (
        '{"entries": [[0, 0, 0, 1], [1, 1, 0, 1]], '
        '"objects": ["R/(y)", "R/(x^3+y)"], "window": [-1, 1]}'
    )


# ---------------------------------------------------------------- properties

_GAMMA_POOL = ("A1", "A3", "A5", "D4t", "D5t", "D4", "D6", "A1+A1", "A2+D4t")


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_every_koszul_splitting_factorizes(data):
    name = data.draw(st.sampled_from(_GAMMA_POOL))
    p = _model(name)
    choice = {}
    for exps, coeff in p.poly.sorted_terms():
        divisors = [i for i, e in enumerate(exps) if e > 0]
        choice[exps] = data.draw(st.sampled_from(divisors))
    k = koszul_mf(p, gamma_choice=choice)
    k.validate()
    assert k.rank0 == k.rank1 == 2 ** (len(k.koszul_data.eta) - 1)
