"""Quiver-building machines: returning-arrow quivers, multi-layer quivers,
the two Z-coverings and the maps between them."""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import (
    BoundQuiver,
    LinearCombination,
    PathAlgebra,
    maximal_bound_paths,
    require_properly_graded,
)
from .errors import NotNicelyGraded, NotProperlyGraded, WindowError
from .quiver import Arrow, Grading, Path, Quiver, nicely_graded, vertex_label
from .window import TranslationWindow, with_layer


def vertex_token(v):
    return re.sub(r"[^A-Za-z0-9]+", "_", vertex_label(v)).strip("_") or "v"


def _fresh(name, taken):
    out, k = name, 1
    while out in taken:
        out = f"{name}_{k}"
        k += 1
    taken.add(out)
    return out


@dataclass
class ReturningArrowQuiver:
    """Bound quiver of a trivial extension, with arrow provenance.

    ``tags`` maps each arrow id to "alpha", "beta" or "gamma"; ``provenance``
    maps each added arrow to the socle element it returns along. ``n`` is the
    length of the maximal bound paths of the original algebra; ``order`` is 1
    for a returning-arrow quiver and 2 for a double one, so maximal bound
    paths of ``bound`` have length n + order.
    """

    bound: BoundQuiver
    base: BoundQuiver
    n: int
    tags: dict
    provenance: dict
    rho_m: tuple
    extra: tuple
    evaluate: object = field(repr=False, default=None)
    order: int = 1

    @property
    def quiver(self):
        return self.bound.quiver

    @property
    def top(self):
        return self.n + self.order

    def added_arrows(self):
        return list(self.provenance)


class _TrivialExtension:
    """Evaluation of paths of the extended quiver in A + DA.

    A path with no added arrow maps to its class in A. A path Y.beta_f.X
    (traversal order) maps to the functional p -> f*(X.p.Y) on the block of A
    running from the end of the path back to its start. Two or more added
    arrows map to zero.
    """

    def __init__(self, alg, top, socle):
        self.alg = alg
        self.top = top
        self.n_base = len(alg.quiver.arrows)
        self.socle = socle  # [(s, t, vector)] in added-arrow order
        self.blocks = {}
        for k, (s, t, vec) in enumerate(socle):
            self.blocks.setdefault((s, t), []).append(k)
        self._coords = {}

    def dual_coordinate(self, f, vec):
        s, t, _ = self.socle[f]
        members = self.blocks[(s, t)]
        if not vec:
            return Fraction(0)
        key = frozenset(vec.items())
        if key not in self._coords:
            sol = linalg.solve([self.socle[m][2] for m in members], vec)
            if sol is None:
                raise NotProperlyGraded("top-degree class outside the span of the chosen maximal bound paths")
            self._coords[key] = dict(zip(members, sol))
        return self._coords[key].get(f, Fraction(0))

    def __call__(self, s, word):
        marks = [k for k, a in enumerate(word) if a >= self.n_base]
        if not marks:
            return {("L", k): c for k, c in self.alg.normal_form_word(s, word).items()}
        if len(marks) > 1:
            return {}
        pos = marks[0]
        f = word[pos] - self.n_base
        ys, xs = word[:pos], word[pos + 1:]
        deg = self.top - len(xs) - len(ys)
        if deg < 0:
            return {}
        fs = self.socle[f][0]
        v = self.alg.tgt[xs[-1]] if xs else fs
        out = {}
        for p in self.alg.basis(deg, v, s):
            val = self.dual_coordinate(f, self.alg.normal_form_word(fs, xs + p[1] + ys))
            if val:
                out[("D", p)] = val
        return out


def _extend(alg, base_relations, top, socle, names, tags):
    """Quiver and relations of the trivial extension of ``alg`` along ``socle``."""
    q = alg.quiver
    vs = q.vertices
    arrows = list(q.arrows)
    for name, (s, t, _) in zip(names, socle):
        arrows.append(Arrow(name, vs[t], vs[s]))
    ext = Quiver(vs, arrows)
    evaluate = _TrivialExtension(alg, top, socle)
    n_base = len(q.arrows)
    double = []
    for f, (fs, ft, _) in enumerate(socle):
        for g, (gs, gt, _) in enumerate(socle):
            if fs == gt:
                double.append(LinearCombination({ext.path(names[f], names[g]): 1}))
    ext_alg = PathAlgebra(ext, list(base_relations) + double)
    rho_m, extra = [], []
    for degree in range(2, top + 3):
        found = []
        for (s, k), keys in sorted(ext_alg.level(degree).items()):
            groups = {}
            for key in keys:
                groups.setdefault(sum(1 for a in key[1] if a >= n_base), []).append(key)
            for count, members in sorted(groups.items()):
                images = {key: evaluate(s, key[1]) for key in members}
                order = {key: n for n, key in enumerate(members)}
                for vec in linalg.kernel(images, order):
                    rel = ext_alg.to_combination(vec)
                    found.append(rel)
                    (rho_m if count == 1 else extra).append(rel)
        if found:
            ext_alg.add_relations(found)
    bound = BoundQuiver(ext, list(base_relations) + double + rho_m + extra)
    return bound, tuple(rho_m), tuple(extra), evaluate


def returning_arrow_quiver(bq, mb=None, degree_bound=None):
    """Bound quiver of the trivial extension of kQ/(rho), identity twist."""
    q = bq.quiver
    if not q.vertices:
        return ReturningArrowQuiver(bq, bq, 0, {}, {}, (), (), None)
    n = require_properly_graded(bq, degree_bound)
    alg = bq.algebra
    if mb is None:
        mb = maximal_bound_paths(bq, degree_bound)
    socle = []
    for elem, deg in zip(mb.elements, mb.degrees):
        vec = alg.reduce(elem)
        if deg != n or not vec:
            raise NotProperlyGraded(f"{elem} is not a nonzero class of length {n}")
        s, t = q.vertex_index[elem.source], q.vertex_index[elem.target]
        for a in alg.out[t]:
            if alg.multiply(vec, (a,), n):
                raise NotProperlyGraded(f"{elem} is not annihilated by {q.arrows[a].id}")
        socle.append((s, t, vec))
    taken = {a.id for a in q.arrows}
    names = [_fresh(f"beta{k}", taken) for k in range(len(socle))]
    bound, rho_m, extra, evaluate = _extend(alg, bq.relations, n, socle, names, None)
    tags = {a.id: "alpha" for a in q.arrows}
    tags.update({name: "beta" for name in names})
    provenance = dict(zip(names, mb.elements))
    return ReturningArrowQuiver(bound, bq, n, tags, provenance, rho_m, extra, evaluate)


def double_returning_quiver(raq):
    """Add one loop per vertex: the returning-arrow quiver of a returning-arrow quiver.

    The socle element at each vertex is scaled so that the symmetrizing form
    of the first extension takes the value 1 on it; with that choice the
    computed relations contain the commutators alpha.gamma - gamma.alpha.
    """
    q = raq.quiver
    if not q.vertices:
        return raq
    top = raq.top
    alg = raq.bound.algebra
    mb = maximal_bound_paths(raq.bound, top + 1)
    socle = []
    for elem, vec, deg in zip(mb.elements, mb.vectors, mb.degrees):
        if deg != top or elem.source != elem.target:
            raise NotProperlyGraded(f"{elem} is not a loop of length {top}")
        s = q.vertex_index[elem.source]
        form = sum(c * raq.evaluate(s, key[1]).get(("D", (s, ())), 0) for key, c in vec.items())
        socle.append((s, s, linalg.scale(vec, 1 / Fraction(form))))
    if sorted(s for s, _, _ in socle) != list(range(len(q.vertices))):
        raise NotProperlyGraded("expected exactly one top-degree loop class at every vertex")
    taken = {a.id for a in q.arrows}
    names = [_fresh(f"gamma_{vertex_token(q.vertices[s])}", taken) for s, _, _ in socle]
    bound, rho_m, extra, evaluate = _extend(alg, raq.bound.relations, top, socle, names, None)
    tags = dict(raq.tags)
    tags.update({name: "gamma" for name in names})
    provenance = {name: alg.to_combination(vec) for name, (_, _, vec) in zip(names, socle)}
    return ReturningArrowQuiver(bound, raq.bound, raq.n, tags, provenance, rho_m, extra, evaluate, order=2)


@dataclass
class MultiLayerQuiver:
    """n + 2 floors of an n-nicely-graded quiver joined by gamma and beta arrows."""

    bound: BoundQuiver
    base: BoundQuiver
    n: int
    grading: Grading
    floor: dict  # vertex -> floor r
    base_vertex: dict  # vertex -> vertex of the base quiver
    tags: dict
    origin: dict  # arrow id -> (base arrow id | base vertex | socle index, floor)
    raq: ReturningArrowQuiver

    @property
    def quiver(self):
        return self.bound.quiver


def _check_grading(q, grading):
    found = nicely_graded(q)
    if not isinstance(found, Grading):
        raise NotNicelyGraded(f"not nicely-graded: cyclic walk {found} has nonzero grade")
    if grading is None:
        return found
    for a in q.arrows:
        if grading[a.target] != grading[a.source] + 1:
            raise NotNicelyGraded(f"grading fails on arrow {a.id}")
    return grading


def multilayer_quiver(bq, grading=None, mb=None, degree_bound=None):
    q = bq.quiver
    grading = _check_grading(q, grading)
    raq = returning_arrow_quiver(bq, mb, degree_bound)
    n = raq.n
    u = grading.labels
    floors = range(n + 2)
    name = {(i, r): (i, u[i], u[i] + r) for i in q.vertices for r in floors}
    vertices = [name[(i, r)] for r in floors for i in q.vertices]
    arrows, tags, origin = [], {}, {}

    def add(aid, s, t, tag, src):
        arrows.append(Arrow(aid, s, t))
        tags[aid] = tag
        origin[aid] = src

    for r in floors:
        for a in q.arrows:
            add(f"{a.id}@{r}", name[(a.source, r)], name[(a.target, r)], "alpha", (a.id, r))
    taken = {a.id for a in q.arrows} | set(raq.provenance)
    gamma_names = {i: _fresh(f"gamma_{vertex_token(i)}", taken) for i in q.vertices}
    for r in range(n + 1):
        for i in q.vertices:
            add(f"{gamma_names[i]}@{r}", name[(i, r)], name[(i, r + 1)], "gamma", (i, r))
    for k, (beta, p) in enumerate(raq.provenance.items()):
        add(beta, name[(p.target, 0)], name[(p.source, n + 1)], "beta", (k, 0))
    hq = Quiver(vertices, arrows)

    def lift(path, floors_of):
        ids = [a if raq.tags[a] == "beta" else f"{a}@{r}" for a, r in zip(path.arrows, floors_of)]
        return hq.path(*ids)

    rels = []
    for r in floors:
        for rel in bq.relations:
            rels.append(LinearCombination({lift(p, [r] * len(p)): c for p, c in rel.terms.items()}))
    for r in range(n):
        for i in q.vertices:
            g = gamma_names[i]
            rels.append(LinearCombination({hq.path(f"{g}@{r}", f"{g}@{r + 1}"): 1}))
    for r in range(n + 1):
        for a in q.arrows:
            lhs = hq.path(f"{gamma_names[a.source]}@{r}", f"{a.id}@{r + 1}")
            rhs = hq.path(f"{a.id}@{r}", f"{gamma_names[a.target]}@{r}")
            rels.append(LinearCombination({lhs: 1, rhs: -1}))
    for rel in raq.rho_m:
        terms = {}
        for p, c in rel.terms.items():
            pos = next(k for k, a in enumerate(p.arrows) if raq.tags[a] == "beta")
            terms[lift(p, [0 if k < pos else n + 1 for k in range(len(p))])] = c
        rels.append(LinearCombination(terms))
    bound = BoundQuiver(hq, rels)
    floor = {name[(i, r)]: r for i in q.vertices for r in floors}
    base_vertex = {name[(i, r)]: i for i in q.vertices for r in floors}
    return MultiLayerQuiver(bound, bq, n, grading, floor, base_vertex, tags, origin, raq)


def _base_tau(raq):
    """Nakayama permutation: the start of the top-degree paths ending at each vertex."""
    alg = raq.bound.algebra
    q = raq.quiver
    top = raq.top
    out = {}
    for (s, t), keys in alg.level(top).items():
        if keys:
            out[q.vertices[t]] = q.vertices[s]
    for v in q.vertices:
        out.setdefault(v, v)
    return out


def _lifted_window(raq, lo, hi, weight, kind, margin):
    if lo > hi:
        raise WindowError(f"empty layer range [{lo}, {hi}]")
    q = raq.quiver
    layers = range(lo, hi + 1)
    vertices, layer, base = [], {}, {}
    for m in layers:
        for v in q.vertices:
            name = with_layer(v, m)
            vertices.append(name)
            layer[name], base[name] = m, v
    arrows, tags, origin = [], {}, {}
    for m in layers:
        for a in q.arrows:
            m2 = m + weight(a.id)
            if m2 > hi:
                continue
            aid = f"{a.id}@{m}"
            arrows.append(Arrow(aid, with_layer(a.source, m), with_layer(a.target, m2)))
            tags[aid] = raq.tags.get(a.id, "alpha")
            origin[aid] = (a.id, m)
    wq = Quiver(vertices, arrows)
    rels = []
    for rel in raq.bound.relations:
        for m in layers:
            terms = {}
            for p, c in rel.terms.items():
                ids, cur = [], m
                for a in p.arrows:
                    ids.append(f"{a}@{cur}")
                    cur += weight(a)
                if cur > hi:
                    terms = None
                    break
                terms[wq.path(*ids)] = c
            if terms:
                rels.append(LinearCombination(terms))
    bound = BoundQuiver(wq, rels)
    tau = _base_tau(raq) if kind == "second" else {v: v for v in q.vertices}
    if margin is None:
        margin = 1 if kind == "first" else raq.top
    return TranslationWindow(bound, kind, raq.n, raq.top, lo, hi, margin, layer, base, tau, tags, origin)


def zq_first_window(raq, lo, hi, margin=None):
    """Slabs lo..hi of the first covering: alpha arrows stay in a slab, beta arrows climb one."""
    return _lifted_window(raq, lo, hi, lambda a: 1 if raq.tags.get(a) == "beta" else 0, "first", margin)


def zq_second_window(raq, lo, hi, margin=None):
    """Layers lo..hi of the second covering: every arrow climbs one layer."""
    return _lifted_window(raq, lo, hi, lambda a: 1, "second", margin)


@dataclass
class PhiMap:
    vertices: dict
    arrows: dict
    source: TranslationWindow
    target: TranslationWindow


def component_phi(bq, grading, window, source=None):
    """Embed a first-covering window into a second-covering window by (v, m) -> (v, (n+1)m + u(v))."""
    found = nicely_graded(bq.quiver)
    if not isinstance(found, Grading):
        raise NotNicelyGraded(f"not nicely-graded: cyclic walk {found} has nonzero grade")
    grading = _check_grading(bq.quiver, grading)
    n = window.n
    u = grading.labels
    if source is None:
        lo = -((-(window.lo - max(u.values()))) // (n + 1))
        hi = (window.hi - min(u.values())) // (n + 1)
        source = zq_first_window(returning_arrow_quiver(bq), lo, max(lo, hi))
    vmap = {}
    for v in source.quiver.vertices:
        b, m = source.base[v], source.layer[v]
        w = window.vertex(b, (n + 1) * m + u[b])
        if w is not None:
            vmap[v] = w
    amap = {}
    for a in source.quiver.arrows:
        if a.source in vmap and a.target in vmap:
            base_arrow, _ = source.origin[a.id]
            target_id = f"{base_arrow}@{window.layer[vmap[a.source]]}"
            if target_id not in window.quiver.arrow or window.quiver.arrow[target_id].target != vmap[a.target]:
                raise WindowError(f"arrow {a.id} has no image")
            amap[a.id] = target_id
    return PhiMap(vmap, amap, source, window)


def embed_multilayer(mlq, window):
    """Identify the multi-layer quiver with a full subquiver of a second-covering
    window over the double returning-arrow quiver of the reindexed base."""
    vmap = {}
    for v in mlq.quiver.vertices:
        i, t, s = v
        w = window.vertex((i, t), s)
        if w is None:
            raise WindowError(f"window layers [{window.lo}, {window.hi}] miss {vertex_label(v)}")
        vmap[v] = w
    amap = {}
    for a in mlq.quiver.arrows:
        src = vmap[a.source]
        m = window.layer[src]
        tag = mlq.tags[a.id]
        if tag == "alpha":
            base_id = mlq.origin[a.id][0]
        elif tag == "beta":
            base_id = a.id
        else:
            i = mlq.origin[a.id][0]
            base_id = next(aid for aid, (b, layer) in window.origin.items()
                           if layer == m and window.tags[aid] == "gamma" and window.quiver.arrow[aid].source == src)
            base_id = window.origin[base_id][0]
        wid = f"{base_id}@{m}"
        arrow = window.quiver.arrow.get(wid)
        if arrow is None or arrow.target != vmap[a.target] or window.tags[wid] != tag:
            raise WindowError(f"arrow {a.id} of the multi-layer quiver has no matching window arrow")
        amap[a.id] = wid
    return vmap, amap


def section_five_window(bq, lo, hi, grading=None, margin=None):
    """Second-covering window over the double returning-arrow quiver of the reindexed base."""
    grading = _check_grading(bq.quiver, grading)
    reindexed = bq.relabel({v: (v, grading[v]) for v in bq.quiver.vertices})
    raq = returning_arrow_quiver(reindexed)
    double = double_returning_quiver(raq)
    return zq_second_window(double, lo, hi, margin)
