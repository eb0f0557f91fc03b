import pytest
from hypothesis import assume, given

from quiverlab import (
    almost_koszul_check,
    dimension_table,
    graded_resolution,
    is_n_properly_graded,
    load_fixture,
    multilayer_quiver,
    projective,
    quadratic_dual,
    returning_arrow_quiver,
    simple,
    syzygy,
    type_classifier,
)
from quiverlab.errors import BoundTooSmall, RelationError
from quiverlab.homological import loewy_length, top_generators

from strategies import acyclic_bound_quivers


def bq(name):
    return load_fixture(name).bound_quiver()


def a3_sink_algebra():
    mlq = multilayer_quiver(bq("a3_sink"))
    return returning_arrow_quiver(mlq.bound).bound


def test_projective_dimensions_are_a_row_of_the_table():
    k = bq("kronecker")
    p = projective(k, 1)
    assert p.spaces == {(1, 0): 1, (2, 1): 2}
    assert p.relation_violations() == []
    assert [g[:2] for g in top_generators(p)] == [(1, 0)]


def test_syzygy_of_a_kronecker_simple():
    k = bq("kronecker")
    syz = syzygy(k, simple(k, 1))
    assert syz.generator_degrees() == [0]
    assert syz.kernel.spaces == {(2, 1): 2}


def test_kronecker_simples_resolve_linearly():
    k = bq("kronecker")
    report = graded_resolution(k, 1, 2)
    assert report.steps == [[0], [1, 1], []]
    assert report.linear_up_to == 2 and report.first_nonlinear_step is None


def test_a3_sink_resolution_breaks_at_step_three():
    report = graded_resolution(a3_sink_algebra(), (1, 0, 0), 3)
    assert report.steps[:3] == [[0], [1, 1], [2, 2, 2]]
    assert sorted(report.steps[3]) == [3, 3, 3, 4]
    assert report.first_nonlinear_step == 3
    assert report.offending_degree == 4


def test_a3_sink_is_not_almost_koszul():
    verdict = almost_koszul_check(a3_sink_algebra(), 3)
    assert verdict.status == "failure"
    assert verdict.witness["step"] == 3


def test_trivial_extension_of_kronecker_is_linear():
    verdict = almost_koszul_check(returning_arrow_quiver(bq("kronecker")).bound, 3)
    assert verdict.status == "linear" and verdict.p == 2


def test_resolution_argument_checks():
    k = bq("kronecker")
    with pytest.raises(RelationError):
        graded_resolution(k, 7, 2)
    with pytest.raises(BoundTooSmall):
        graded_resolution(k, 1, 4, degree_bound=2)


def test_kronecker_type_profile():
    verdict = type_classifier(quadratic_dual(bq("kronecker")), 8)
    assert verdict.verdict == "growing at bound"
    assert verdict.profile == [2, 4, 6, 8, 10, 12, 14, 16, 18]


def test_a2_is_finite_within_bound():
    verdict = type_classifier(quadratic_dual(bq("a2")), 6)
    assert verdict.verdict == "finite within bound"
    assert verdict.profile[-1] == 0


@given(acyclic_bound_quivers())
def test_projectives_match_the_dimension_table(b):
    bound = loewy_length(b)
    table = dimension_table(b, bound)
    for v in b.quiver.vertices:
        p = projective(b, v, bound)
        assert p.relation_violations() == []
        expected = {(j, t): d for (i, j, t), d in table.entries.items() if i == v and d}
        assert {k: d for k, d in p.spaces.items() if d} == expected


@given(acyclic_bound_quivers())
def test_syzygies_are_exact(b):
    assume(b.quiver.vertices)
    bound = loewy_length(b) + 3
    for v in b.quiver.vertices:
        module = simple(b, v)
        for _ in range(3):
            syz = syzygy(b, module, bound)
            cells = set(syz.cover.spaces) | set(module.spaces) | set(syz.kernel.spaces)
            for cell in cells:
                assert syz.cover.spaces.get(cell, 0) == module.spaces.get(cell, 0) + syz.kernel.spaces.get(cell, 0)
            module = syz.kernel


@given(acyclic_bound_quivers())
def test_quadratic_monomial_free_resolutions_start_linearly(b):
    n = is_n_properly_graded(b)
    assume(n is not None and b.quiver.arrows)
    for v in b.quiver.vertices:
        report = graded_resolution(b, v, 1)
        assert report.steps[0] == [0]
        assert all(d == 1 for d in report.steps[1])
