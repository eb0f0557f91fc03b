import pytest
from hypothesis import assume, given

from quiverlab import (
    hammock,
    is_complete_tau_slice,
    is_n_properly_graded,
    load_fixture,
    mutate,
    mutation_path,
    nicely_graded,
    reduce_depth,
    returning_arrow_quiver,
    section_five_window,
    tau_vv_inverse,
    verify_translation_axioms,
    zq_first_window,
    zq_second_window,
)
from quiverlab.errors import SliceError, WindowError
from quiverlab.geometry import hammock_shift_mismatches, resolve_triple, structural_tau_inverse
from quiverlab.quiver import Grading

from strategies import graded_bound_quivers


def first_window(name, lo, hi):
    return zq_first_window(returning_arrow_quiver(load_fixture(name).bound_quiver()), lo, hi)


def layer(win, m):
    return [v for v in win.quiver.vertices if win.layer[v] == m]


def test_slice_violations_name_the_failed_condition():
    win = first_window("linear_a3_zero", -1, 2)
    assert is_complete_tau_slice(win, [(9, 9)]).reason == "outside window"
    assert is_complete_tau_slice(win, [(1, 0), (1, 1)]).reason == "orbit hit twice"
    assert is_complete_tau_slice(win, [(1, 0), (2, 0)]).reason == "orbit uncovered"
    k = first_window("kronecker", 0, 2)
    verdict = is_complete_tau_slice(k, [(1, 0), (2, 1)])
    assert not verdict and verdict.reason == "not convex"


def test_layer_slice_sources_and_sinks():
    win = first_window("linear_a3_zero", -1, 2)
    s = is_complete_tau_slice(win, layer(win, 0))
    assert s.vertices == ((1, 0), (2, 0), (3, 0))
    assert s.sources() == [(1, 0)] and s.sinks() == [(3, 0)]


def test_reduce_depth_on_linear_a3():
    win = first_window("linear_a3_zero", -1, 2)
    moves, final = reduce_depth(is_complete_tau_slice(win, layer(win, 0)))
    assert moves == [((3, 0), "-")]
    assert set(final.vertices) == {(3, -1), (1, 0), (2, 0)}


def test_mutation_path_between_layers():
    win = first_window("linear_a3_zero", -1, 2)
    start = is_complete_tau_slice(win, layer(win, 0))
    goal = is_complete_tau_slice(win, layer(win, 1))
    assert mutation_path(start, goal) == [((1, 0), "+"), ((2, 0), "+"), ((3, 0), "+")]
    assert mutation_path(start, start) == []


def test_mutation_rejects_non_sources_and_leaving_the_window():
    win = first_window("linear_a3_zero", 0, 1)
    s = is_complete_tau_slice(win, layer(win, 0))
    with pytest.raises(SliceError):
        mutate(s, (2, 0), "+")
    with pytest.raises(SliceError):
        mutate(s, (3, 0), "-")


def test_kronecker_double_window_hammocks():
    win = section_five_window(load_fixture("kronecker").bound_quiver(), 0, 6)
    anchor = (1, 0, 3)
    starting = hammock(win, anchor)
    assert starting.entries == {
        ((1, 0, 3), 0): 1, ((2, 1, 4), 1): 2, ((1, 0, 4), 1): 1,
        ((1, 0, 5), 2): 1, ((2, 1, 5), 2): 2, ((1, 0, 6), 3): 1,
    }
    assert hammock(win, anchor, "ending").mu((2, 1, 2), -1) == 2
    assert hammock_shift_mismatches(win, anchor) == []
    with pytest.raises(WindowError):
        hammock(win, (1, 0, 0))


def test_tau_vv_inverse_literal_image():
    win = section_five_window(load_fixture("kronecker").bound_quiver(), 0, 6)
    image = tau_vv_inverse(win, (1, 0, 3))
    assert image == (1, 2, 6)
    assert resolve_triple(win, image) == (1, 0, 6) == win.tau_inverse((1, 0, 3))
    with pytest.raises(WindowError):
        tau_vv_inverse(first_window("kronecker", 0, 3), (1, 1))


@given(graded_bound_quivers())
def test_mutations_invert_and_keep_slices_nicely_graded(b):
    n = is_n_properly_graded(b)
    assume(n is not None and n >= 1)
    win = zq_first_window(returning_arrow_quiver(b), 0, 4)
    s = is_complete_tau_slice(win, layer(win, 2))
    assert s
    for v in s.sources():
        up = mutate(s, v, "+")
        assert is_complete_tau_slice(win, up.vertices)
        assert isinstance(nicely_graded(up.quiver), Grading)
        back = mutate(up, win.tau_inverse(v), "-")
        assert back.vertices == s.vertices
    for v in s.sinks():
        down = mutate(s, v, "-")
        assert isinstance(nicely_graded(down.quiver), Grading)
        assert mutate(down, win.tau(v), "+").vertices == s.vertices


@given(graded_bound_quivers())
def test_hammocks_shift_onto_hammocks(b):
    n = is_n_properly_graded(b)
    assume(n is not None and n >= 1)
    raq = returning_arrow_quiver(b)
    for win in (zq_first_window(raq, 0, 4), zq_second_window(raq, 0, 3 * (n + 1))):
        assert verify_translation_axioms(win).ok
        for v in win.interior():
            if win.tau(v) is not None:
                assert hammock_shift_mismatches(win, v) == []


@given(graded_bound_quivers())
def test_tau_vv_formula_on_interior_vertices(b):
    n = is_n_properly_graded(b)
    assume(n is not None and n >= 1)
    win = section_five_window(b, 0, 3 * (n + 2))
    checked = 0
    for v in win.interior():
        expected = win.tau_inverse(v)
        if expected is None:
            continue
        image = tau_vv_inverse(win, v)
        assert resolve_triple(win, image) == expected
        assert structural_tau_inverse(win, v) == expected
        checked += 1
    assert checked
