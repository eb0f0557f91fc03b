"""Slices, mutations, hammocks and translation checks on finite windows."""

from collections import deque
from dataclasses import dataclass, field

from .algebra import BoundQuiver
from .errors import NotNicelyGraded, SliceError, WindowError
from .quiver import Grading, depth, nicely_graded, vertex_label


@dataclass(frozen=True)
class TauSlice:
    window: object = field(repr=False)
    vertices: tuple
    bound: BoundQuiver = field(repr=False)

    @property
    def quiver(self):
        return self.bound.quiver

    def sources(self):
        q = self.quiver
        return [v for v in q.vertices if not q.incoming[v]]

    def sinks(self):
        q = self.quiver
        return [v for v in q.vertices if not q.outgoing[v]]


@dataclass(frozen=True)
class SliceViolation:
    """First failed slice condition; always falsy so it reads as a verdict."""

    reason: str
    witness: object

    def __bool__(self):
        return False

    def __str__(self):
        return f"{self.reason}: {self.witness}"


def _reach(q, start, forward):
    seen = set(start)
    queue = deque(start)
    while queue:
        x = queue.popleft()
        step = q.outgoing[x] if forward else q.incoming[x]
        for a in step:
            y = a.target if forward else a.source
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _induced(window, members):
    q = window.quiver.full_subquiver(members)
    rels = [r for r in window.bound.relations if r.source in members and r.target in members]
    return BoundQuiver(q, rels, normalized=True)


def is_complete_tau_slice(window, subset):
    """TauSlice if ``subset`` is convex and meets every tau-orbit of the window once."""
    members = set(subset)
    order = window.quiver.vertex_index
    for v in sorted(members, key=lambda x: order.get(x, -1)):
        if v not in order:
            return SliceViolation("outside window", v)
    hit = {}
    for v in sorted(members, key=order.__getitem__):
        key = window.orbit_key(v)
        if key in hit:
            return SliceViolation("orbit hit twice", (hit[key], v))
        hit[key] = v
    for v in window.quiver.vertices:
        if window.orbit_key(v) not in hit:
            return SliceViolation("orbit uncovered", v)
    q = window.quiver
    below = _reach(q, members, True)
    above = _reach(q, members, False)
    for v in q.vertices:
        if v in below and v in above and v not in members:
            return SliceViolation("not convex", v)
    ordered = tuple(v for v in q.vertices if v in members)
    return TauSlice(window, ordered, _induced(window, members))


def mutate(tau_slice, vertex, direction):
    """Replace a source by its tau-inverse ("+") or a sink by its tau ("-")."""
    if vertex not in tau_slice.vertices:
        raise SliceError(f"{vertex_label(vertex)} is not in the slice")
    window = tau_slice.window
    if direction == "+":
        if vertex not in tau_slice.sources():
            raise SliceError(f"{vertex_label(vertex)} is not a source of the slice")
        image = window.tau_inverse(vertex)
    elif direction == "-":
        if vertex not in tau_slice.sinks():
            raise SliceError(f"{vertex_label(vertex)} is not a sink of the slice")
        image = window.tau(vertex)
    else:
        raise SliceError(f"unknown mutation direction {direction!r}")
    if image is None:
        raise SliceError(f"mutating {vertex_label(vertex)} leaves the window")
    members = [v for v in tau_slice.vertices if v != vertex] + [image]
    verdict = is_complete_tau_slice(window, members)
    if not verdict:
        raise SliceError(f"mutation produced an invalid slice ({verdict})")
    return verdict


def _moves(tau_slice):
    sources, sinks = set(tau_slice.sources()), set(tau_slice.sinks())
    for v in tau_slice.vertices:
        if v in sources:
            yield v, "+"
        if v in sinks:
            yield v, "-"


def mutation_path(start, goal, budget=10000):
    """Shortest mutation sequence from ``start`` to ``goal`` (breadth first,
    moves in window order), or None if ``budget`` slices are explored first."""
    target = frozenset(goal.vertices)
    first = frozenset(start.vertices)
    if first == target:
        return []
    back = {first: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for v, d in _moves(current):
            try:
                nxt = mutate(current, v, d)
            except SliceError:
                continue
            key = frozenset(nxt.vertices)
            if key in back:
                continue
            back[key] = (frozenset(current.vertices), v, d)
            if key == target:
                steps = []
                while back[key] is not None:
                    prev, v, d = back[key]
                    steps.append((v, d))
                    key = prev
                return steps[::-1]
            if len(back) >= budget:
                return None
            queue.append(nxt)
    return None


def reduce_depth(tau_slice, n=None):
    """Sink-mutate a maximal-grade vertex until the slice has depth ``n``.

    ``n`` defaults to top - 1 of the window. Returns (moves, final slice).
    """
    if n is None:
        n = tau_slice.window.top - 1
    moves = []
    limit = len(tau_slice.window.quiver.vertices) ** 2 + 1
    current = tau_slice
    while True:
        grading = nicely_graded(current.quiver)
        if not isinstance(grading, Grading):
            raise NotNicelyGraded(f"slice is not nicely-graded: cyclic walk {grading}")
        if depth(grading) <= n:
            return moves, current
        if len(moves) >= limit:
            raise SliceError("depth reduction did not terminate inside the window")
        top = max(grading.labels.values())
        vertex = next(v for v in current.vertices if grading[v] == top)
        current = mutate(current, vertex, "-")
        moves.append((vertex, "-"))


@dataclass(frozen=True)
class HammockReport:
    """Hammock of bound paths from (``starting``) or into (``ending``) an anchor.

    ``entries`` maps (vertex, offset) to the dimension of the bound paths of
    that length; offsets are path lengths, negated for ending hammocks.
    """

    direction: str
    anchor: object
    entries: dict

    def vertices(self):
        return {v for v, _ in self.entries}

    def mu(self, vertex, offset):
        return self.entries.get((vertex, offset), 0)


def _hammock_entries(window, anchor, direction):
    alg = window.bound.algebra
    q = window.quiver
    a = q.vertex_index[anchor]
    entries = {}
    for t in range(window.top + 1):
        for (s, k), keys in alg.level(t).items():
            if direction == "starting" and s == a:
                entries[(q.vertices[k], t)] = len(keys)
            elif direction == "ending" and k == a:
                entries[(q.vertices[s], -t)] = len(keys)
    return entries


def hammock(window, anchor, direction="starting"):
    if direction not in ("starting", "ending"):
        raise WindowError(f"unknown hammock direction {direction!r}")
    if anchor not in window.quiver.vertex_index:
        raise WindowError(f"{vertex_label(anchor)} is not a window vertex")
    if not window.in_interior(anchor):
        raise WindowError(f"{vertex_label(anchor)} lies within the boundary margin {window.margin}")
    return HammockReport(direction, anchor, _hammock_entries(window, anchor, direction))


def hammock_shift_mismatches(window, anchor):
    """Differences between H_anchor shifted by top and the starting hammock at tau(anchor)."""
    ending = hammock(window, anchor, "ending")
    source = window.tau(anchor)
    if source is None:
        raise WindowError(f"tau of {vertex_label(anchor)} is outside the window")
    starting = _hammock_entries(window, source, "starting")
    shifted = {(v, t + window.top): mu for (v, t), mu in ending.entries.items()}
    keys = set(shifted) | set(starting)
    return sorted(
        ((k, shifted.get(k, 0), starting.get(k, 0)) for k in keys if shifted.get(k, 0) != starting.get(k, 0)),
        key=repr,
    )


def resolve_triple(window, triple):
    """Window vertex named by (i, t, s), reading the grade t modulo n + 1."""
    i, t, s = triple
    step = window.n + 1
    for base in window.base_tau:
        if isinstance(base, tuple) and len(base) == 2 and base[0] == i and (t - base[1]) % step == 0:
            return window.vertex(base, s)
    return None


def tau_vv_inverse(window, vertex):
    """(i, t, s) -> (i, t + n + 1, s + n + 2) on a second-covering window of a double quiver."""
    if window.kind != "second" or window.top != window.n + 2:
        raise WindowError("tau_vv is defined on second-covering windows of double returning-arrow quivers")
    i, t, s = vertex
    image = (i, t + window.n + 1, s + window.n + 2)
    if resolve_triple(window, image) is None:
        raise WindowError(f"{vertex_label(image)} is outside the window")
    return image


def structural_tau_inverse(window, vertex):
    """End of the nonzero bound paths of length ``top`` starting at ``vertex``."""
    entries = _hammock_entries(window, vertex, "starting")
    ends = sorted({v for (v, t), mu in entries.items() if t == window.top and mu}, key=window.quiver.vertex_index.__getitem__)
    return ends[0] if len(ends) == 1 else None


@dataclass(frozen=True)
class AxiomReport:
    checked: int
    missing: tuple

    @property
    def ok(self):
        return not self.missing


def verify_translation_axioms(window):
    """For interior i: bound j -> i of length l forces bound tau(i) -> j of length top - l,
    and bound i -> k of length l forces bound k -> tau^-1(i) of length top - l."""
    alg = window.bound.algebra
    q = window.quiver
    vi = q.vertex_index
    top = window.top
    dims = {}
    for t in range(top + 1):
        for (s, k), keys in alg.level(t).items():
            dims[(s, k, t)] = len(keys)
    checked, missing = 0, []
    for v in window.interior():
        a = vi[v]
        back, fwd = window.tau(v), window.tau_inverse(v)
        for (s, k, t), d in sorted(dims.items()):
            if k == a and back is not None:
                checked += 1
                if not dims.get((vi[back], s, top - t)):
                    missing.append(("ending", v, q.vertices[s], t))
            if s == a and fwd is not None:
                checked += 1
                if not dims.get((k, vi[fwd], top - t)):
                    missing.append(("starting", v, q.vertices[k], t))
    return AxiomReport(checked, tuple(missing))
