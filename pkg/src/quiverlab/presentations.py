"""Bimodules over a base algebra, the lower-triangular matrix algebras they
assemble into, and the floor-by-floor description of their modules.

A bimodule generated by marker arrows (one loop per vertex, or one returning
arrow per maximal bound path) is realized inside an auxiliary bound quiver:
the base quiver plus the marker arrows. Its relations are homogeneous in the
number of markers, so the part of marker-degree k is a well-defined bimodule
(the k-th tensor power when the markers only meet the base through
commutation rules). Dimensions are read from the standard words.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import BoundQuiver, LinearCombination, quadratic_dual
from .constructions import multilayer_quiver, returning_arrow_quiver, vertex_token
from .errors import PresentationError, RelationError
from .homological import QuiverRepresentation
from .quiver import Arrow, Quiver


@dataclass
class BimodulePresentation:
    """Marker-degree ``weight`` part of ``flat`` as a bimodule over ``base``.

    ``dims[(i, j, t)]`` is the dimension of the part running i -> j spanned
    by flattened paths of length t.
    """

    name: str
    base: BoundQuiver = field(repr=False)
    generators: tuple
    relations: tuple = field(repr=False)
    flat: BoundQuiver = field(repr=False)
    markers: frozenset = field(repr=False)
    weight: int = 1
    degree_bound: int = None

    def __post_init__(self):
        if self.degree_bound is None:
            self.degree_bound = self.flat.default_degree_bound()
        self.dims = _marker_dims(self.flat, self.markers, self.weight, self.degree_bound)

    def total(self):
        return sum(self.dims.values())

    def power(self, k):
        return BimodulePresentation(f"{self.name}^{k}", self.base, self.generators, self.relations,
                                    self.flat, self.markers, k, self.degree_bound)


def _marker_dims(flat, markers, weight, bound):
    alg = flat.algebra
    q = flat.quiver
    marked = {q.arrow_index[m] for m in markers}
    dims = {}
    for t in range(bound + 1):
        for (s, k), keys in alg.level(t).items():
            n = sum(1 for key in keys if sum(a in marked for a in key[1]) == weight)
            if n:
                dims[(q.vertices[s], q.vertices[k], t)] = n
    return dims


def _loop_names(q):
    taken = {a.id for a in q.arrows}
    names = {}
    for v in q.vertices:
        name = f"gamma_{vertex_token(v)}"
        while name in taken:
            name += "_"
        taken.add(name)
        names[v] = name
    return names


def _loop_flattening(bq, sign, square_zero):
    q = bq.quiver
    names = _loop_names(q)
    fq = Quiver(q.vertices, list(q.arrows) + [Arrow(names[v], v, v) for v in q.vertices])
    rels = list(bq.relations)
    for a in q.arrows:
        rels.append(LinearCombination({fq.path(names[a.source], a.id): 1, fq.path(a.id, names[a.target]): sign}))
    if square_zero:
        rels += [LinearCombination({fq.path(names[v], names[v]): 1}) for v in q.vertices]
    gens = tuple((names[v], v, v) for v in q.vertices)
    return BoundQuiver(fq, rels), gens, frozenset(names.values())


def bimodule_U(lam, degree_bound=None):
    """Loops gamma_v commuting with the arrows: alpha gamma - gamma alpha, gamma^2 = 0."""
    flat, gens, markers = _loop_flattening(lam, -1, True)
    return BimodulePresentation("U", lam, gens, flat.relations, flat, markers, 1, degree_bound)


def bimodule_U_hat(gamma, degree_bound=None):
    """Loops anticommuting with the arrows and free otherwise; weight k is the k-th tensor power."""
    flat, gens, markers = _loop_flattening(gamma, 1, False)
    return BimodulePresentation("U_hat", gamma, gens, flat.relations, flat, markers, 1, degree_bound)


def bimodule_D(lam, raq=None, degree_bound=None):
    """The dual DLambda, generated by the returning arrows."""
    raq = returning_arrow_quiver(lam) if raq is None else raq
    betas = [a for a in raq.quiver.arrows if raq.tags.get(a.id) == "beta"]
    gens = tuple((a.id, a.source, a.target) for a in betas)
    return BimodulePresentation("D", lam, gens, raq.bound.relations, raq.bound,
                                frozenset(a.id for a in betas), 1, degree_bound)


def _mixed_complement(raq):
    """Orthogonal complement of the quadratic returning-arrow rows inside the
    span of length-2 paths through exactly one returning arrow, per block."""
    q = raq.quiver
    beta = {a for a, tag in raq.tags.items() if tag == "beta"}
    rows = {}
    for r in raq.rho_m:
        if r.length == 2:
            rows.setdefault((r.source, r.target), []).append(r.terms)
    blocks = {}
    for p in q.paths(2):
        if sum(a in beta for a in p.arrows) == 1:
            blocks.setdefault((p.source, p.target), []).append(p)
    out = []
    for block in sorted(blocks, key=lambda b: (q.vertex_index[b[0]], q.vertex_index[b[1]])):
        keys = sorted(blocks[block], key=q.path_key)
        order = {p: k for k, p in enumerate(keys)}
        for vec in linalg.complement(rows.get(block, []), keys, order):
            out.append(LinearCombination(vec))
    return out


def bimodule_U_tilde(gamma, raq=None, degree_bound=None):
    """Generated by the returning arrows of Lambda = Gamma^!, with relations
    the Gamma relations, all beta-beta composites and the complement of the
    quadratic returning-arrow rows."""
    if raq is None:
        raq = returning_arrow_quiver(quadratic_dual(gamma))
    if any(r.length != 2 for r in raq.rho_m):
        raise RelationError("returning-arrow rows are not quadratic; the dual bimodule is not defined")
    q = raq.quiver
    beta = [a for a in q.arrows if raq.tags.get(a.id) == "beta"]
    gamma_rels = [LinearCombination(r.terms) for r in gamma.relations]
    bb = [LinearCombination({q.path(f.id, g.id): 1}) for f in beta for g in beta if f.target == g.source]
    flat = BoundQuiver(q, gamma_rels + bb + _mixed_complement(raq))
    gens = tuple((a.id, a.source, a.target) for a in beta)
    return BimodulePresentation("U_tilde", gamma, gens, flat.relations, flat,
                                frozenset(a.id for a in beta), 1, degree_bound)


@dataclass
class MatrixAlgebraPresentation:
    """Lower-triangular (n+2) x (n+2) grid; ``grid[(a, b)]`` lists the
    bimodules placed at row a, column b. Row a holds floor n + 2 - a."""

    side: str
    n: int
    base: BoundQuiver = field(repr=False)
    grid: dict
    mlq: object = field(repr=False, default=None)

    @property
    def size(self):
        return self.n + 2

    def floor_of(self, index):
        return self.n + 2 - index

    def entry_names(self):
        return {k: [b.name for b in v] for k, v in sorted(self.grid.items())}

    def entry_totals(self):
        return {k: sum(b.total() for b in v) for k, v in sorted(self.grid.items())}

    def total(self):
        return sum(self.entry_totals().values())

    def flattened_dims(self):
        """Dimensions keyed by (multi-layer source, multi-layer target, length)."""
        out = {}
        for (a, b), parts in self.grid.items():
            lo, hi = self.floor_of(a), self.floor_of(b)
            for part in parts:
                for (i, j, t), d in part.dims.items():
                    key = (_floor_vertex(self.mlq, i, lo), _floor_vertex(self.mlq, j, hi), t)
                    out[key] = out.get(key, 0) + d
        return out


def _floor_vertex(mlq, v, r):
    u = mlq.grading[v]
    return (v, u, u + r)


def _place(n, diagonal, steps, corner):
    """Grid with ``diagonal`` on the diagonal, steps[k-1] k places below it, ``corner`` at (n+2, 1)."""
    grid = {}
    size = n + 2
    for a in range(1, size + 1):
        for b in range(1, a + 1):
            k = a - b
            parts = [diagonal] if k == 0 else ([steps[k - 1]] if k <= len(steps) and steps[k - 1] else [])
            if (a, b) == (size, 1):
                parts = parts + [corner]
            if parts:
                grid[(a, b)] = parts
    return grid


def matrix_presentation(base, side="lambda", degree_bound=None):
    """Lower-triangular grid over Lambda (``side="lambda"``) or over Gamma (``side="gamma"``).

    Over Lambda: Lambda on the diagonal, U just below it, DLambda in the
    corner. Over Gamma: Gamma on the diagonal, k places below it the k-th
    power of U_hat, and U_tilde added in the corner.
    """
    if side == "lambda":
        lam = base
        mlq = multilayer_quiver(lam)
        n = mlq.n
        diag = _base_part(lam, "Lambda", degree_bound)
        steps = [bimodule_U(lam, degree_bound)]
        corner = bimodule_D(lam, mlq.raq, degree_bound)
    elif side == "gamma":
        for r in base.relations:
            if r.length != 2:
                raise RelationError(f"not quadratic: {r}")
        lam = quadratic_dual(base)
        mlq = multilayer_quiver(lam)
        n = mlq.n
        diag = _base_part(base, "Gamma", degree_bound)
        u_hat = bimodule_U_hat(base, degree_bound)
        steps = [u_hat.power(k) for k in range(1, n + 2)]
        corner = bimodule_U_tilde(base, mlq.raq, degree_bound)
    else:
        raise PresentationError(f"unknown side {side!r}")
    return MatrixAlgebraPresentation(side, n, base, _place(n, diag, steps, corner), mlq)


def _base_part(bq, name, degree_bound):
    return BimodulePresentation(name, bq, (), bq.relations, bq, frozenset(), 0, degree_bound)


def multilayer_side_algebra(mp):
    """The bound quiver the grid should reproduce: the multi-layer quiver, or its quadratic dual."""
    return mp.mlq.bound if mp.side == "lambda" else quadratic_dual(mp.mlq.bound)


@dataclass
class IsoVerdict:
    ok: bool
    nonzero_rows: list
    dimension_mismatches: list


def _flat_word(mlq, path, loop_name):
    """Image of a multi-layer path in one flattened algebra: (kind, arrow ids),
    or None when it passes two markers and so vanishes in the grid."""
    kinds = [mlq.tags[a] for a in path.arrows]
    markers = [k for k in kinds if k != "alpha"]
    if len(markers) > 1:
        return None
    ids = []
    for a, kind in zip(path.arrows, kinds):
        if kind == "alpha":
            ids.append(mlq.origin[a][0])
        elif kind == "gamma":
            ids.append(loop_name[mlq.origin[a][0]])
        else:
            ids.append(a)
    return (markers[0] if markers else "alpha"), ids


def verify_matrix_iso(mp, mlq, degree_bound=None):
    """Send every relation row of the multi-layer quiver through the assignment
    alpha_r -> alpha on floor r, gamma -> loop generator, beta -> returning
    generator, and compare dimensions degree by degree."""
    if mlq.n != mp.n:
        raise PresentationError(f"grid has n = {mp.n} but the multi-layer quiver has n = {mlq.n}")
    if mp.side != "lambda":
        raise PresentationError("relation transport is defined for the Lambda-side grid")
    lam = mp.base
    u = mp.grid[(2, 1)][0]
    d = mp.grid[(mp.size, 1)][-1]
    loop_name = {v: name for name, v, _ in u.generators}
    flats = {"alpha": lam, "gamma": u.flat, "beta": d.flat}
    bad = []
    for rel in mlq.bound.relations:
        total = {}
        for p, c in rel.terms.items():
            word = _flat_word(mlq, p, loop_name)
            if word is None:
                continue
            kind, ids = word
            flat = flats[kind]
            linalg.add_scaled(total, flat.algebra.normal_form(flat.quiver.path(*ids)), c)
        if total:
            bad.append(str(rel))
    grid_dims = mp.flattened_dims()
    bound = mlq.bound.default_degree_bound() if degree_bound is None else degree_bound
    mismatches = []
    alg = mlq.bound.algebra
    vs = mlq.quiver.vertices
    seen = {}
    for t in range(bound + 1):
        for (s, k), keys in alg.level(t).items():
            seen[(vs[s], vs[k], t)] = len(keys)
    for key in sorted(set(seen) | set(grid_dims), key=repr):
        if key[2] <= bound and seen.get(key, 0) != grid_dims.get(key, 0):
            mismatches.append((key, grid_dims.get(key, 0), seen.get(key, 0)))
    return IsoVerdict(not bad and not mismatches, bad, mismatches)


def tensor_presentation(base, side="lambda", degree_bound=None):
    """Dimensions of the tensor algebra over the diagonal, built from chains of floors.

    Over Lambda only chains with at most one bimodule factor survive (squares
    are divided out). Over Gamma every chain contributes; a chain of k loop
    steps is the k-th power of U_hat.
    """
    mp = matrix_presentation(base, side, degree_bound)
    n, mlq = mp.n, mp.mlq
    diag = mp.grid[(1, 1)][0]
    if side == "lambda":
        step = mp.grid[(2, 1)][0] if (2, 1) in mp.grid else None
        corner = mp.grid[(n + 2, 1)][-1]
        max_len = 1
    else:
        step = bimodule_U_hat(base, degree_bound)
        corner = mp.grid[(n + 2, 1)][-1]
        max_len = n + 1
    dims = {}

    def put(part, lo, hi):
        for (i, j, t), d in part.dims.items():
            key = (_floor_vertex(mlq, i, lo), _floor_vertex(mlq, j, hi), t)
            dims[key] = dims.get(key, 0) + d

    for r in range(n + 2):
        put(diag, r, r)
    # chains r -> r+1 -> ... -> r+k of loop steps
    for r in range(n + 2):
        for k in range(1, max_len + 1):
            if r + k > n + 1:
                break
            put(step.power(k) if k > 1 else step, r, r + k)
    # the returning step 0 -> n+1 cannot be extended on either side
    put(corner, 0, n + 1)
    return dims


@dataclass
class DiagramModule:
    """Floors M_0..M_{n+1} over the base algebra with the connecting maps.

    ``f[r]`` maps (vertex, degree) to the columns of the action of the loop
    generator from floor r to floor r + 1; ``g`` maps (returning arrow,
    degree) to the columns of the wrap-around action from floor 0 to floor n + 1.
    """

    base: BoundQuiver = field(repr=False)
    n: int
    components: list
    f: list
    g: dict

    def composite_violations(self):
        """Places where f[r+1] after f[r] is nonzero."""
        bad = []
        for r in range(len(self.f) - 1):
            for (v, d), cols in self.f[r].items():
                nxt = self.f[r + 1].get((v, d + 1))
                for c, img in enumerate(cols):
                    out = {}
                    if nxt:
                        for k, x in img.items():
                            linalg.add_scaled(out, nxt[k], x)
                    if out:
                        bad.append((r, v, d, c))
        return bad


def split_module(rep, mlq):
    """Cut a multi-layer representation into floors and connecting maps."""
    lam = mlq.base
    n = mlq.n
    components, f = [], []
    for r in range(n + 2):
        spaces, maps = {}, {}
        for (v, d), dim in rep.spaces.items():
            if mlq.floor[v] == r and dim:
                spaces[(mlq.base_vertex[v], d)] = dim
        for (aid, d), cols in rep.maps.items():
            if mlq.tags[aid] == "alpha" and mlq.origin[aid][1] == r:
                maps[(mlq.origin[aid][0], d)] = cols
        components.append(QuiverRepresentation(lam, spaces, maps))
    for r in range(n + 1):
        fr = {}
        for (aid, d), cols in rep.maps.items():
            if mlq.tags[aid] == "gamma" and mlq.origin[aid][1] == r:
                fr[(mlq.origin[aid][0], d)] = cols
        f.append(fr)
    g = {(aid, d): cols for (aid, d), cols in rep.maps.items() if mlq.tags[aid] == "beta"}
    return DiagramModule(lam, n, components, f, g)


def assemble_module(dm, mlq):
    """Inverse of split_module; rejects data violating the multi-layer relations."""
    if dm.n != mlq.n:
        raise PresentationError(f"diagram has n = {dm.n} but the multi-layer quiver has n = {mlq.n}")
    if dm.composite_violations():
        raise PresentationError("consecutive connecting maps do not compose to zero")
    name = {(mlq.base_vertex[v], mlq.floor[v]): v for v in mlq.quiver.vertices}
    spaces, maps = {}, {}
    for r, comp in enumerate(dm.components):
        for (v, d), dim in comp.spaces.items():
            spaces[(name[(v, r)], d)] = dim
        for (a, d), cols in comp.maps.items():
            maps[(f"{a}@{r}", d)] = cols
    gamma_id = {(mlq.origin[a][0], mlq.origin[a][1]): a for a, tag in mlq.tags.items() if tag == "gamma"}
    for r, fr in enumerate(dm.f):
        for (v, d), cols in fr.items():
            maps[(gamma_id[(v, r)], d)] = cols
    maps.update(dm.g)
    rep = QuiverRepresentation(mlq.bound, spaces, maps)
    bad = rep.relation_violations()
    if bad:
        raise PresentationError(f"assembled data violates {bad[0][0]} in degree {bad[0][1]}")
    return rep
