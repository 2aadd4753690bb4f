import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bracketing.decomposer import (
    DepthLimitExceeded,
    LeafBudgetExceeded,
    NumericalDomainError,
    build_cover,
    decompose_step,
    delta_of,
    delta_recursion,
    fast_cover_stats,
    gamma_of,
    height,
    iter_cover,
    iter_nodes,
    ones_path_weights,
)
from bracketing.geometry import TypedBracket, unit_cube

S = math.sqrt(0.5)


def test_delta_of_examples():
    assert delta_of(unit_cube(1), 1, 0.5) == 0.5
    assert delta_of(unit_cube(2), 1, 0.5) == pytest.approx(0.7071067811865476, abs=1e-16)
    Q1 = TypedBracket((0.0, 0.0), (S, 1.0), 1)
    expected = math.sqrt((S - 0.5) / S)
    assert delta_of(Q1, 1, 0.5) == pytest.approx(expected, rel=1e-15)
    assert delta_of(Q1, 1, 0.5) == pytest.approx(0.5412, abs=1e-4)


def test_delta_of_domain():
    with pytest.raises(NumericalDomainError):
        delta_of(TypedBracket((0.0,), (0.5,), 1), 1, 0.5)
    with pytest.raises(ValueError):
        delta_of(unit_cube(2), 3, 0.5)


def test_gamma_of_examples():
    assert gamma_of(unit_cube(2), 1, S) == (S, S)
    Q2 = TypedBracket((S, 0.0), (1.0, S), 2)
    dlt = delta_of(Q2, 2, 0.5)
    assert dlt == pytest.approx((S - 0.5) / 0.5, rel=1e-15)
    assert gamma_of(Q2, 2, dlt) == (S, dlt * S)
    b = TypedBracket((0.0, 0.0, 0.0), (0.9, 0.8, 0.7), 1)
    assert gamma_of(b, 1, 0.5) == (0.45, 0.4, 0.35)


def test_gamma_volume_identity():
    # prod(gamma) = W(P) - eps for every decomposed box
    for node in iter_nodes(3, 0.1):
        if node.delta is None:
            continue
        g = gamma_of(node.bracket, node.bracket.type_index, node.delta)
        assert math.prod(g) == pytest.approx(node.weight - 0.1, abs=1e-13)


def test_decompose_step_d1():
    kids = decompose_step(unit_cube(1), 1, 0.5)
    assert kids == [TypedBracket((0.0,), (0.5,), 1), TypedBracket((0.5,), (1.0,), 2)]


def test_decompose_step_d2():
    kids = decompose_step(unit_cube(2), 1, 0.5)
    assert [k.type_index for k in kids] == [1, 2, 3]
    assert kids[0] == TypedBracket((0.0, 0.0), (S, 1.0), 1)
    assert kids[1] == TypedBracket((S, 0.0), (1.0, S), 2)
    assert kids[2] == TypedBracket((S, S), (1.0, 1.0), 3)
    for k, w in zip(kids, (S, S, 0.5)):
        assert k.weight == pytest.approx(w, abs=1e-15)


def test_decompose_step_child_count():
    # a type-j box has d - j + 2 children
    for node in iter_nodes(4, 0.2):
        if node.delta is not None:
            j = node.bracket.type_index
            assert len(decompose_step(node.bracket, j, 0.2)) == 4 - j + 2


def test_decompose_step_gate():
    b = TypedBracket((0.0,), (0.5,), 1)
    with pytest.raises(ValueError):
        decompose_step(b, 1, 0.5)
    with pytest.raises(ValueError):
        decompose_step(TypedBracket((0.5, 0.5), (1.0, 1.0), 3), 3, 0.1)


def test_build_cover_examples():
    leaves = []
    stats = build_cover(1, 0.5, leaves.append)
    assert leaves == [TypedBracket((0.0,), (0.5,), 1), TypedBracket((0.5,), (1.0,), 2)]
    assert (stats.leaf_count, stats.height) == (2, 1)
    for d in (1, 3, 6):
        leaves = []
        stats = build_cover(d, 1.0, leaves.append)
        assert leaves == [unit_cube(d)]
        assert (stats.leaf_count, stats.height) == (1, 0)
    assert build_cover(2, 0.1).leaf_count <= 210


@pytest.mark.parametrize("eps", [0.5, 0.3, 0.25, 0.2, 0.15, 0.1, 0.07, 0.05, 0.01])
def test_d1_cover_is_the_uniform_grid(eps):
    # in one dimension every split peels off [b - eps, b); ceil(1/eps) cells result
    leaves = list(iter_cover(1, eps))
    assert len(leaves) == math.ceil(1 / eps - 1e-9)
    tops = sorted(b.beta[0] for b in leaves)
    assert tops[-1] == 1.0
    for k, t in enumerate(reversed(tops)):
        assert t == pytest.approx(1 - k * eps, abs=1e-12)


def test_build_cover_rejects_bad_input():
    for eps in (0.0, -0.1, 1.5, math.nan):
        with pytest.raises(ValueError):
            build_cover(2, eps)
    with pytest.raises(ValueError):
        build_cover(0, 0.5)


def test_leaf_budget():
    seen = []
    with pytest.raises(LeafBudgetExceeded) as info:
        build_cover(2, 0.1, seen.append, max_leaves=10)
    assert len(seen) == 10
    assert info.value.stats.leaf_count == 10
    assert build_cover(2, 0.1, max_leaves=142).leaf_count == 142


def test_depth_guard():
    with pytest.raises(DepthLimitExceeded):
        build_cover(2, 0.1, delta_fn=lambda P, j, eps: 0.999)


def test_determinism():
    a = list(iter_cover(3, 0.1))
    b = list(iter_cover(3, 0.1))
    assert a == b


def test_leaf_order_is_depth_first_by_type():
    leaves = list(iter_cover(2, 0.5))
    assert [b.type_index for b in leaves] == [1, 2, 3, 2, 3, 3]


def test_leaf_invariants():
    for d, eps in [(2, 0.1), (3, 0.2)]:
        for b in iter_cover(d, eps):
            assert b.weight <= eps + 1e-12
            if b.type_index <= d:
                assert b.alpha[-1] == 0.0
                assert b.weight == math.prod(b.beta)


def test_height_examples():
    for d in (1, 2, 7):
        assert height(d, 1.0) == 0
    assert height(1, 0.5) == 1
    assert height(2, 0.5) == 2
    w = ones_path_weights(2, 0.5)
    assert w[1] == pytest.approx(S)
    assert w[2] == pytest.approx(0.3827, abs=1e-4)


@pytest.mark.parametrize("d,eps", [(1, 0.1), (2, 0.1), (3, 0.05), (4, 0.1), (6, 0.2)])
def test_weight_drop_per_level(d, eps):
    w = ones_path_weights(d, eps)
    for prev, cur in zip(w, w[1:]):
        assert prev - cur >= eps / d - 1e-15


@pytest.mark.parametrize("d,eps", [(1, 0.5), (2, 0.1), (3, 0.1), (4, 0.2), (5, 0.1)])
def test_fast_stats_match_python(d, eps):
    assert fast_cover_stats(d, eps) == build_cover(d, eps)


def test_delta_recursion_examples():
    got = delta_recursion(S, 1.0, 1, 2, 0.5)
    assert got == pytest.approx(((1 - 0.5 / S) / 0.5) ** 0.5 * S, rel=1e-15)
    assert got == pytest.approx(0.54120, abs=1e-4)
    Q1 = decompose_step(unit_cube(2), 1, 0.5)[0]
    assert got == pytest.approx(delta_of(Q1, 1, 0.5), rel=1e-10)
    assert delta_recursion(S, 1.0, 2, 2, 0.5) < got
    with pytest.raises(NumericalDomainError):
        delta_recursion(0.5, 1.0, 1, 2, 0.5)
    with pytest.raises(NumericalDomainError):
        delta_recursion(0.9, 0.4, 1, 2, 0.5)


def test_delta_recursion_d1_identity():
    # d = 1: ((W - eps/delta)/(W - eps)) * delta must equal the direct value
    for node in iter_nodes(1, 0.07):
        if node.delta is not None and node.parent is not None:
            p = node.parent
            assert delta_recursion(p.delta, p.weight, 1, 1, 0.07) == pytest.approx(node.delta, rel=1e-10)


@st.composite
def recursion_args(draw):
    d = draw(st.integers(1, 6))
    eps = draw(st.floats(0.01, 0.5))
    W = draw(st.floats(eps * 1.05, 1.0))
    assume(eps / W * 1.05 < 0.99)
    delta = draw(st.floats(eps / W * 1.05, 0.999))
    assume(delta * W > eps * 1.01 and delta < 1)
    return d, eps, W, delta


@given(recursion_args(), st.floats(1.001, 1.2))
def test_delta_recursion_monotone(args, factor):
    d, eps, W, delta = args
    base = delta_recursion(delta, W, 1, d, eps)
    assert 0.0 < base < 1.0
    if delta * factor < 1:
        assert delta_recursion(delta * factor, W, 1, d, eps) > base
    if W * factor <= 1:
        assert delta_recursion(delta, W * factor, 1, d, eps) > base
    vals = [delta_recursion(delta, W, i, d, eps) for i in range(1, d + 1)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
