"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime.

The lines are collected by conftest and shown in the terminal summary.
"""

import time
from contextlib import contextmanager

import pytest

from quiverlab import (
    BoundQuiver,
    LinearCombination,
    almost_koszul_check,
    component_phi,
    dimension_table,
    graded_resolution,
    is_complete_tau_slice,
    is_n_properly_graded,
    load_fixture,
    multilayer_quiver,
    nicely_graded,
    quadratic_closure_check,
    quadratic_dual,
    returning_arrow_quiver,
    type_classifier,
    zq_second_window,
)
from quiverlab.errors import NotNicelyGraded
from quiverlab.quiver import Grading, Quiver, Walk, depth

import test_constructions
import test_dsl_cli
import test_geometry
import test_presentations
import test_relation_algebra
from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed > limit:
            status = "FAIL"
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed <= limit, f"criterion {number} took {elapsed:.2f}s"


def bq(name):
    return load_fixture(name).bound_quiver()


def test_criterion_1_kronecker_multilayer():
    with criterion(1, "Kronecker multi-layer quiver", 1):
        mlq = multilayer_quiver(bq("kronecker"))
        tags = list(mlq.tags.values())
        assert len(mlq.quiver.vertices) == 6
        assert len(mlq.quiver.arrows) == 12
        assert (tags.count("alpha"), tags.count("gamma"), tags.count("beta")) == (6, 4, 2)
        assert is_n_properly_graded(mlq.bound) == 2
        assert isinstance(nicely_graded(mlq.quiver), Grading)


def test_criterion_2_triangle_zero():
    with criterion(2, "not nicely-graded triangle and its second window", 1):
        q = bq("triangle_zero")
        assert isinstance(nicely_graded(q.quiver), Walk)
        win = zq_second_window(returning_arrow_quiver(q), 0, 1)
        assert len(win.quiver.vertices) == 6 and len(win.quiver.arrows) == 6
        slice_ = is_complete_tau_slice(win, win.quiver.vertices)
        assert slice_
        assert depth(nicely_graded(slice_.quiver)) == 1
        with pytest.raises(NotNicelyGraded):
            component_phi(q, None, win)


def test_criterion_3_a3_sink_resolution():
    with criterion(3, "resolution of S(1,0,0) turns nonlinear at step 3", 60):
        lam_hat = multilayer_quiver(bq("a3_sink")).bound
        algebra = returning_arrow_quiver(lam_hat).bound
        report = graded_resolution(algebra, (1, 0, 0), 3)
        assert report.steps[:3] == [[0], [1, 1], [2, 2, 2]]
        assert sorted(d for d in report.steps[3] if d <= 4) == [3, 3, 3, 4]
        assert report.first_nonlinear_step == 3
        verdict = almost_koszul_check(algebra, 3)
        assert verdict.status == "failure"
        assert verdict.witness["step"] == 3


def _tensor_returning_quiver_with_R(gamma_tensor):
    """Dual-side quiver with four returning arrows and the relation set R (monomials in traversal order)."""
    dual = quadratic_dual(gamma_tensor)
    q = dual.quiver
    arrows = [(a.id, a.source, a.target) for a in q.arrows]
    arrows += [(f"g{k}", (2, 2), (1, 1)) for k in range(1, 5)]
    extended = Quiver(q.vertices, arrows)
    monomials = [
        "br g1", "bd g1", "ar g2", "ad g2", "g1 bl", "g1 bu", "g2 al", "g2 au",
        "bd g3", "ar g3", "g3 al", "g3 bu", "ad g4", "br g4", "g4 bl", "g4 au",
    ]
    relations = [LinearCombination({extended.path(*p.arrows): c for p, c in r.terms.items()}) for r in dual.relations]
    relations += [LinearCombination([(extended.path(*m.split()), 1)]) for m in monomials]
    return BoundQuiver(extended, relations)


def test_criterion_4_tensor_square():
    with criterion(4, "tensor square of Kronecker: dimension 16, closure fails at degree 4", 30):
        gamma_tensor = bq("kronecker_square")
        assert dimension_table(gamma_tensor).total() == 16
        verdict = quadratic_closure_check(_tensor_returning_quiver_with_R(gamma_tensor), 3)
        assert not verdict.quadratic
        assert verdict.failing_degree == 4


def test_criterion_5_infinite_type_is_preserved():
    with criterion(5, "Kronecker type evidence survives the multi-layer step", 300):
        gamma = bq("kronecker")
        assert type_classifier(gamma, 8).verdict == "growing at bound"
        lam_hat = multilayer_quiver(quadratic_dual(gamma))
        gamma_hat = quadratic_dual(lam_hat.bound)
        verdict = almost_koszul_check(returning_arrow_quiver(lam_hat.bound).bound, 4, degree_bound=8)
        assert verdict.status == "linear" and verdict.q >= 4
        hat_type = type_classifier(gamma_hat, 6)
        assert hat_type.verdict == "growing at bound" and hat_type.bound == 6


def test_criterion_6_tower():
    with criterion(6, "two multi-layer iterations from Kronecker", 60):
        first = multilayer_quiver(bq("kronecker"))
        assert is_n_properly_graded(first.bound) == 2
        assert isinstance(nicely_graded(first.quiver), Grading)
        second = multilayer_quiver(first.bound)
        assert is_n_properly_graded(second.bound) == 3
        assert isinstance(nicely_graded(second.quiver), Grading)


PROPERTY_SUITES = [
    test_relation_algebra.test_quadratic_dual_is_an_involution,
    test_relation_algebra.test_dual_dimensions_add_up_per_block,
    test_relation_algebra.test_dimension_table_matches_brute_force,
    test_geometry.test_mutations_invert_and_keep_slices_nicely_graded,
    test_geometry.test_hammocks_shift_onto_hammocks,
    test_geometry.test_tau_vv_formula_on_interior_vertices,
    test_constructions.test_component_phi_preserves_relation_rows,
    test_presentations.test_lambda_grid_matches_the_multilayer,
    test_presentations.test_gamma_grid_matches_the_dual_multilayer,
    test_presentations.test_split_then_assemble_is_the_identity,
]

FIXTURE_CHECKS = [
    test_relation_algebra.test_fixture_dimensions_match_brute_force,
    test_dsl_cli.test_fixture_round_trip,
]


def test_criterion_7_property_suites():
    from conftest import FIXTURES
    with criterion(7, f"{len(PROPERTY_SUITES)} property suites at 100 cases each plus fixtures", 600):
        for suite in PROPERTY_SUITES:
            suite()
        for check in FIXTURE_CHECKS:
            for name in FIXTURES:
                if check is test_relation_algebra.test_fixture_dimensions_match_brute_force and name == "empty":
                    continue
                check(name)
