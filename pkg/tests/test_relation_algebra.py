from fractions import Fraction

import pytest
from hypothesis import assume, given

from quiverlab import (
    BoundQuiver,
    LinearCombination,
    bound_path_basis,
    dimension_table,
    is_n_properly_graded,
    load_fixture,
    maximal_bound_paths,
    normalize_relations,
    quadratic_closure_check,
    quadratic_dual,
    validate,
)
from quiverlab.algebra import require_properly_graded
from quiverlab.errors import BoundTooSmall, NotProperlyGraded, RelationError

import oracles
from conftest import FIXTURES
from strategies import acyclic_bound_quivers, as_oracle_input


def _block_rows(bq):
    rows = {}
    for r in bq.relations:
        rows.setdefault((r.source, r.target), []).append({p.arrows: c for p, c in r.terms.items()})
    return rows


def _block_columns(q):
    cols = {}
    for p in q.paths(2):
        cols.setdefault((p.source, p.target), []).append(p.arrows)
    return cols


def test_relations_are_rejected_when_mixed_or_not_parallel():
    q = validate({"vertices": [1, 2, 3], "arrows": [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)]})
    with pytest.raises(RelationError):
        normalize_relations(q, [LinearCombination([(q.path("a", "b"), 1), (q.path("c"), 1)])])


def test_normalization_is_reduced_echelon():
    q = validate({"vertices": [1, 2, 3], "arrows": [("a", 1, 2), ("b", 1, 2), ("c", 2, 3)]})
    ac, bc = q.path("a", "c"), q.path("b", "c")
    rels = normalize_relations(q, [
        LinearCombination([(ac, 2), (bc, 2)]),
        LinearCombination([(ac, 1), (bc, 1)]),
    ])
    assert len(rels) == 1
    assert rels[0].terms == {ac: Fraction(1), bc: Fraction(1)}


def test_kronecker_dimensions():
    table = dimension_table(load_fixture("kronecker").bound_quiver(), 3)
    assert table.by_degree() == [2, 2, 0, 0]
    assert table[(1, 2, 1)] == 2


def test_bound_path_basis_refuses_degrees_above_bound():
    bq = load_fixture("kronecker").bound_quiver()
    assert [p.arrows for p in bound_path_basis(bq, 1, 2, 1)] == [("a",), ("b",)]
    with pytest.raises(BoundTooSmall):
        bound_path_basis(bq, 1, 2, 9, degree_bound=3)


def test_maximal_bound_paths_of_triangle_zero():
    bq = load_fixture("triangle_zero").bound_quiver()
    mb = maximal_bound_paths(bq)
    assert sorted(str(p) for p in mb.elements) == ["al", "be", "ga"]
    assert is_n_properly_graded(bq) == 1


def test_not_properly_graded_is_reported_with_witnesses():
    q = validate({"vertices": [1, 2, 3, 4], "arrows": [("a", 1, 2), ("b", 2, 3), ("c", 1, 4)]})
    bq = BoundQuiver(q, [])
    assert is_n_properly_graded(bq) is None
    with pytest.raises(NotProperlyGraded):
        require_properly_graded(bq)


def test_kronecker_square_totals_sixteen_and_is_quadratic():
    bq = load_fixture("kronecker_square").bound_quiver()
    table = dimension_table(bq, 6)
    assert table.total() == 16
    assert table.by_degree() == [4, 8, 4, 0, 0, 0, 0]
    assert quadratic_closure_check(bq, 4).quadratic


def test_quadratic_dual_rejects_long_relations():
    q = validate({"vertices": [1, 2, 3, 4], "arrows": [("a", 1, 2), ("b", 2, 3), ("c", 3, 4)]})
    bq = BoundQuiver(q, [LinearCombination([(q.path("a", "b", "c"), 1)])])
    with pytest.raises(RelationError):
        quadratic_dual(bq)


def test_closure_check_flags_a_missing_cubic_relation():
    q = validate({"vertices": [1, 2, 3, 4], "arrows": [("a", 1, 2), ("b", 2, 3), ("c", 3, 4)]})
    bq = BoundQuiver(q, [LinearCombination([(q.path("a", "b", "c"), 1)])])
    verdict = quadratic_closure_check(bq, 2)
    assert not verdict.quadratic
    assert verdict.failing_degree == 3


@pytest.mark.parametrize("name", [f for f in FIXTURES if f != "empty"])
def test_fixture_dimensions_match_brute_force(name):
    bq = load_fixture(name).bound_quiver()
    bound = 5 if name != "kronecker_square" else 4
    got = {k: v for k, v in dimension_table(bq, bound).entries.items() if v}
    assert got == oracles.brute_dimensions(*as_oracle_input(bq), bound)


@given(acyclic_bound_quivers())
def test_dimension_table_matches_brute_force(bq):
    got = {k: v for k, v in dimension_table(bq, 5).entries.items() if v}
    assert got == oracles.brute_dimensions(*as_oracle_input(bq), 5)


@given(acyclic_bound_quivers())
def test_dual_dimensions_add_up_per_block(bq):
    dual = quadratic_dual(bq)
    rel_rows, dual_rows = _block_rows(bq), _block_rows(dual)
    for block, cols in _block_columns(bq.quiver).items():
        r = oracles.rank(rel_rows.get(block, []), cols)
        d = oracles.rank(dual_rows.get(block, []), cols)
        assert r + d == len(cols)


@given(acyclic_bound_quivers())
def test_dual_matches_brute_complement(bq):
    dual_rows = _block_rows(quadratic_dual(bq))
    rel_rows = _block_rows(bq)
    for block, cols in _block_columns(bq.quiver).items():
        expected = oracles.orthogonal_complement(rel_rows.get(block, []), cols)
        assert oracles.same_span(dual_rows.get(block, []), expected, cols)


@given(acyclic_bound_quivers())
def test_quadratic_dual_is_an_involution(bq):
    twice = quadratic_dual(quadratic_dual(bq))
    a, b = _block_rows(bq), _block_rows(twice)
    for block, cols in _block_columns(bq.quiver).items():
        assert oracles.same_span(a.get(block, []), b.get(block, []), cols)


@given(acyclic_bound_quivers())
def test_quadratic_relations_pass_the_closure_check(bq):
    top = len(bq.quiver.vertices)
    assume(top >= 1)
    assert quadratic_closure_check(bq, top).quadratic
