"""Plain quivers, paths, walks and vertex gradings."""

from collections import deque
from dataclasses import dataclass

from .errors import ValidationError, WalkError


@dataclass(frozen=True)
class Arrow:
    id: object
    source: object
    target: object


@dataclass(frozen=True)
class Path:
    """Composable arrow sequence in traversal order (first arrow first)."""

    source: object
    target: object
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    @property
    def length(self):
        return len(self.arrows)

    def then(self, other):
        if self.target != other.source:
            raise WalkError(f"cannot append path at {other.source} to path ending at {self.target}")
        return Path(self.source, other.target, self.arrows + other.arrows)

    def __str__(self):
        if not self.arrows:
            return f"e[{vertex_label(self.source)}]"
        return ".".join(str(a) for a in self.arrows)


def vertex_label(v):
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_label(x) for x in v) + ")"
    return str(v)


class Quiver:
    """Finite quiver with ordered vertices and ordered, named arrows."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
        self.vertex_index = {v: k for k, v in enumerate(self.vertices)}
        self.arrow_index = {a.id: k for k, a in enumerate(self.arrows)}
        self.arrow = {a.id: a for a in self.arrows}
        self.outgoing = {v: [] for v in self.vertices}
        self.incoming = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.outgoing[a.source].append(a)
            self.incoming[a.target].append(a)

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def path(self, *arrow_ids, at=None):
        """Path through the given arrows; ``at`` names the vertex of a trivial path."""
        if not arrow_ids:
            if at not in self.vertex_index:
                raise WalkError(f"unknown vertex {at!r}")
            return Path(at, at, ())
        arrows = [self.arrow[a] for a in arrow_ids]
        for x, y in zip(arrows, arrows[1:]):
            if x.target != y.source:
                raise WalkError(f"arrows {x.id} and {y.id} do not compose")
        return Path(arrows[0].source, arrows[-1].target, tuple(arrow_ids))

    def paths(self, length, source=None):
        """All paths of the given length, optionally from one source."""
        starts = self.vertices if source is None else (source,)
        out = []
        for v in starts:
            frontier = [Path(v, v, ())]
            for _ in range(length):
                frontier = [Path(p.source, a.target, p.arrows + (a.id,)) for p in frontier for a in self.outgoing[p.target]]
            out.extend(frontier)
        return out

    def path_key(self, p):
        """Canonical order: (length, source, target, arrow sequence)."""
        return (
            len(p.arrows),
            self.vertex_index[p.source],
            self.vertex_index[p.target],
            tuple(self.arrow_index[a] for a in p.arrows),
        )

    def components(self):
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for a in self.outgoing[x] + self.incoming[x]:
                    y = a.target if a.source == x else a.source
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(sorted(comp, key=self.vertex_index.__getitem__))
        return comps

    def full_subquiver(self, vertices):
        keep = set(vertices)
        return Quiver(
            [v for v in self.vertices if v in keep],
            [a for a in self.arrows if a.source in keep and a.target in keep],
        )

    def relabel(self, mapping):
        return Quiver([mapping[v] for v in self.vertices], [Arrow(a.id, mapping[a.source], mapping[a.target]) for a in self.arrows])


def validate(raw):
    """Build a Quiver from ``{"vertices": [...], "arrows": [(id, src, dst), ...]}``.

    Every violation is collected before raising ValidationError.
    """
    if isinstance(raw, Quiver):
        raw = {"vertices": raw.vertices, "arrows": [(a.id, a.source, a.target) for a in raw.arrows]}
    vertices = list(raw.get("vertices", ()))
    arrows = [tuple(a) if not isinstance(a, Arrow) else (a.id, a.source, a.target) for a in raw.get("arrows", ())]
    problems = []
    seen = set()
    for v in vertices:
        if v in seen:
            problems.append(f"duplicate vertex id {vertex_label(v)}")
        seen.add(v)
    ids = set()
    for a in arrows:
        if len(a) != 3:
            problems.append(f"malformed arrow {a!r}")
            continue
        aid, s, t = a
        if aid in ids:
            problems.append(f"duplicate arrow id {aid}")
        ids.add(aid)
        for end in (s, t):
            if end not in seen:
                problems.append(f"dangling endpoint {vertex_label(end)} of arrow {aid}")
    if problems:
        raise ValidationError(problems)
    return Quiver(vertices, arrows)


@dataclass(frozen=True)
class Walk:
    """Zig-zag of paths; ``forward[h]`` says whether segment h is traversed along its arrows."""

    segments: tuple
    forward: tuple

    @classmethod
    def zigzag(cls, paths, first_forward=True):
        """Alternating walk (p0 forward, p1 backward, ...), trivial segments dropped."""
        flags = [(h % 2 == 0) == first_forward for h in range(len(paths))]
        kept = [(p, f) for p, f in zip(paths, flags) if len(p)]
        return cls(tuple(p for p, _ in kept), tuple(f for _, f in kept))

    def start(self):
        p, f = self.segments[0], self.forward[0]
        return p.source if f else p.target

    def end(self):
        p, f = self.segments[-1], self.forward[-1]
        return p.target if f else p.source

    def is_cyclic(self):
        return bool(self.segments) and self.start() == self.end()

    def __str__(self):
        parts = [(str(p) if f else f"({p})^-1") for p, f in zip(self.segments, self.forward)]
        return " ; ".join(parts)


def walk_grade(q, w):
    """Alternating length sum of a walk (forward segments count positively)."""
    position = None
    total = 0
    for p, f in zip(w.segments, w.forward):
        if p.arrows:
            q.path(*p.arrows)  # raises when not a path in q
        enter, leave = (p.source, p.target) if f else (p.target, p.source)
        if position is not None and enter != position:
            raise WalkError(f"walk breaks at {vertex_label(position)} -> {vertex_label(enter)}")
        position = leave
        total += len(p) if f else -len(p)
    return total


@dataclass(frozen=True)
class Grading:
    base: object
    labels: dict

    def __getitem__(self, v):
        return self.labels[v]

    def __contains__(self, v):
        return v in self.labels


def _merge_steps(steps):
    """Group single-arrow steps (arrow, forward) into maximal same-direction paths."""
    segments, flags = [], []
    for arrow, fwd in steps:
        if flags and flags[-1] == fwd:
            prev = segments[-1]
            if fwd:
                segments[-1] = Path(prev.source, arrow.target, prev.arrows + (arrow.id,))
            else:
                segments[-1] = Path(arrow.source, prev.target, (arrow.id,) + prev.arrows)
        else:
            segments.append(Path(arrow.source, arrow.target, (arrow.id,)))
            flags.append(fwd)
    return Walk(tuple(segments), tuple(flags))


def nicely_graded(q):
    """Return a Grading with label(target) = label(source) + 1 on every arrow,
    or a cyclic Walk of nonzero grade proving that none exists."""
    labels = {}
    base = None
    for comp in q.components():
        root = comp[0]
        local = {root: 0}
        parent = {root: None}  # vertex -> (arrow, forward) used to reach it
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for a in q.outgoing[x] + q.incoming[x]:
                for fwd in (True, False):
                    if (a.source if fwd else a.target) != x:
                        continue
                    y = a.target if fwd else a.source
                    want = local[x] + (1 if fwd else -1)
                    if y not in local:
                        local[y] = want
                        parent[y] = (a, fwd)
                        queue.append(y)
                    elif local[y] != want:
                        return _conflict_walk(parent, root, x, y, a, fwd)
        low = min(local.values())
        for v in comp:
            labels[v] = local[v] - low
        comp_base = min((v for v in comp if labels[v] == 0), key=q.vertex_index.__getitem__)
        if base is None:
            base = comp_base
    return Grading(base, labels)


def _conflict_walk(parent, root, x, y, arrow, fwd):
    def steps_from_root(v):
        out = []
        while parent[v] is not None:
            a, f = parent[v]
            out.append((a, f))
            v = a.source if f else a.target
        return out[::-1]

    to_x = steps_from_root(x)
    back_from_y = [(a, not f) for a, f in reversed(steps_from_root(y))]
    return _merge_steps(to_x + [(arrow, fwd)] + back_from_y)


def depth(g):
    if not g.labels:
        return 0
    return max(g.labels.values()) - min(g.labels.values())


def reindex(q, g):
    """Rename every vertex v to (v, g[v])."""
    return q.relabel({v: (v, g[v]) for v in q.vertices})
