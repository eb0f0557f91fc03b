"""Graded representations, minimal projective covers, syzygies and resolutions."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import BoundQuiver, quadratic_dual, require_properly_graded
from .errors import BoundTooSmall, RelationError
from .quiver import vertex_label


@dataclass
class QuiverRepresentation:
    """Graded representation: ``spaces[(v, d)]`` is a dimension and
    ``maps[(a, d)]`` lists, column by column, the images in degree d + 1 of
    the basis vectors of the source space in degree d (sparse dicts)."""

    bound: BoundQuiver = field(repr=False)
    spaces: dict
    maps: dict = field(repr=False)
    labels: dict = field(default_factory=dict, repr=False)  # (v, d) -> basis labels

    def dim(self, v, d):
        return self.spaces.get((v, d), 0)

    def total(self):
        return sum(self.spaces.values())

    def degrees(self):
        return sorted({d for (_, d) in self.spaces})

    def apply(self, arrow, degree, vec):
        cols = self.maps.get((arrow, degree))
        out = {}
        if cols is None:
            return out
        for c, x in vec.items():
            linalg.add_scaled(out, cols[c], x)
        return out

    def apply_path(self, arrows, degree, vec):
        for a in arrows:
            vec = self.apply(a, degree, vec)
            degree += 1
            if not vec:
                break
        return vec

    def matrix(self, arrow, degree):
        a = self.bound.quiver.arrow[arrow]
        rows, cols = self.dim(a.target, degree + 1), self.dim(a.source, degree)
        images = self.maps.get((arrow, degree), [{}] * cols)
        return [[images[c].get(r, Fraction(0)) for c in range(cols)] for r in range(rows)]

    def relation_violations(self):
        """Relations whose composite maps are nonzero, with the failing degree."""
        bad = []
        for rel in self.bound.relations:
            for (v, d), n in self.spaces.items():
                if v != rel.source:
                    continue
                for c in range(n):
                    total = {}
                    for p, coef in rel.terms.items():
                        linalg.add_scaled(total, self.apply_path(p.arrows, d, {c: Fraction(1)}), coef)
                    if total:
                        bad.append((rel, d))
                        break
        return bad


def simple(bq, vertex, degree=0):
    return QuiverRepresentation(bq, {(vertex, degree): 1}, {}, {(vertex, degree): [vertex]})


def _path_module(bq, gens, bound):
    """Direct sum of projectives P(v)<d> for gens = [(v, d)], truncated at ``bound``.

    Basis at (j, t) is [(g, key)] with key a standard word from gens[g][0].
    """
    alg = bq.algebra
    q = bq.quiver
    vi = q.vertex_index
    spaces, maps, labels = {}, {}, {}
    index = {}
    for g, (v, d) in enumerate(gens):
        for t in range(0, bound - d + 1):
            for (s, k), keys in alg.level(t).items():
                if s != vi[v]:
                    continue
                cell = (q.vertices[k], d + t)
                bucket = labels.setdefault(cell, [])
                for key in keys:
                    index[(g, key)] = (cell, len(bucket))
                    bucket.append((g, key))
    for cell, bucket in labels.items():
        spaces[cell] = len(bucket)
    for cell, bucket in labels.items():
        j, deg = cell
        for a in q.outgoing[j]:
            if deg + 1 > bound:
                continue
            cols = []
            ai = q.arrow_index[a.id]
            for g, key in bucket:
                img = {}
                local = deg - gens[g][1]
                for k2, c in alg.multiply({key: Fraction(1)}, (ai,), local).items():
                    img[index[(g, k2)][1]] = c
                cols.append(img)
            maps[(a.id, deg)] = cols
    return QuiverRepresentation(bq, spaces, maps, labels)


def projective(bq, vertex, degree_bound=None, shift=0):
    bound = bq.default_degree_bound() if degree_bound is None else degree_bound
    return _path_module(bq, [(vertex, shift)], bound + shift)


def top_generators(rep):
    """Degreewise complement of the radical: [(vertex, degree, vector)] in canonical order."""
    q = rep.bound.quiver
    vi = q.vertex_index
    gens = []
    for (v, d) in sorted(rep.spaces, key=lambda c: (c[1], vi[c[0]])):
        n = rep.spaces[(v, d)]
        if not n:
            continue
        ech = linalg.Echelon({k: k for k in range(n)})
        for a in q.incoming[v]:
            for c in range(rep.dim(a.source, d - 1)):
                ech.add(rep.apply(a.id, d - 1, {c: Fraction(1)}))
        for k in range(n):
            unit = {k: Fraction(1)}
            if ech.add(unit):
                gens.append((v, d, unit))
    return gens


@dataclass
class Syzygy:
    generators: list  # [(vertex, degree, vector)] of the module being covered
    cover: QuiverRepresentation
    kernel: QuiverRepresentation
    inclusion: dict = field(repr=False)  # (v, d) -> kernel basis as cover vectors

    def generator_degrees(self):
        return sorted(d for _, d, _ in self.generators)


def syzygy(bq, rep, degree_bound=None, generators=None):
    """Minimal projective cover of ``rep`` and its kernel, exact in degrees <= bound."""
    bound = degree_bound if degree_bound is not None else max(rep.degrees(), default=0) + bq.default_degree_bound()
    gens = top_generators(rep) if generators is None else list(generators)
    cover = _path_module(bq, [(v, d) for v, d, _ in gens], bound)
    alg = bq.algebra
    inclusion, spaces = {}, {}
    for cell, bucket in cover.labels.items():
        images = {}
        for pos, (g, key) in enumerate(bucket):
            v, d, vec = gens[g]
            images[pos] = rep.apply_path([alg.quiver.arrows[a].id for a in key[1]], d, vec)
        basis = linalg.kernel(images, {k: k for k in range(len(bucket))})
        if basis:
            inclusion[cell] = basis
            spaces[cell] = len(basis)
    maps = {}
    q = bq.quiver
    for (j, deg), basis in inclusion.items():
        for a in q.outgoing[j]:
            target = inclusion.get((a.target, deg + 1))
            cols = []
            for vec in basis:
                img = cover.apply(a.id, deg, vec)
                if not img:
                    cols.append({})
                    continue
                coords = linalg.solve(target, img) if target else None
                if coords is None:
                    raise RelationError("cover map is not a module map; the representation violates a relation")
                cols.append({k: c for k, c in enumerate(coords) if c})
            maps[(a.id, deg)] = cols
    kernel = QuiverRepresentation(bq, spaces, maps)
    return Syzygy(gens, cover, kernel, inclusion)


def loewy_length(bq, degree_bound=None):
    bound = bq.default_degree_bound() if degree_bound is None else degree_bound
    return bq.algebra.top_degree(bound) + 1


@dataclass
class ResolutionReport:
    """Generator degrees per step; exact for every degree up to ``bound``."""

    simple: object
    steps: list  # step t -> sorted generator degrees of P^t
    generators: list  # step t -> [(vertex, degree)]
    linear_up_to: int
    first_nonlinear_step: int = None
    offending_degree: int = None
    bound: int = None
    covers: list = field(default_factory=list, repr=False)
    last_syzygy: QuiverRepresentation = field(default=None, repr=False)
    reaches_bound: bool = False  # some cover is nonzero in the bound degree; degrees above it are unseen

    def as_dict(self):
        return {
            "simple": vertex_label(self.simple),
            "steps": [
                {"step": t, "degrees": ds, "generators": [[vertex_label(v), d] for v, d in g]}
                for t, (ds, g) in enumerate(zip(self.steps, self.generators))
            ],
            "linear_up_to": self.linear_up_to,
            "first_nonlinear_step": self.first_nonlinear_step,
            "offending_degree": self.offending_degree,
            "degree_bound": self.bound,
            "reaches_bound": self.reaches_bound,
        }


def graded_resolution(bq, vertex, steps, degree_bound=None):
    """Generator degrees of the minimal graded projective resolution of S(vertex), steps 0..steps."""
    if vertex not in bq.quiver.vertex_index:
        raise RelationError(f"unknown vertex {vertex_label(vertex)}")
    if degree_bound is None:
        degree_bound = steps + loewy_length(bq) + 1
    if degree_bound < steps:
        raise BoundTooSmall(f"degree bound {degree_bound} cannot reach step {steps}")
    module = simple(bq, vertex)
    degs, gens, covers = [], [], []
    linear_up_to, first_bad, bad_degree = -1, None, None
    for t in range(steps + 1):
        syz = syzygy(bq, module, degree_bound)
        here = syz.generator_degrees()
        degs.append(here)
        gens.append([(v, d) for v, d, _ in syz.generators])
        covers.append(syz.cover)
        if first_bad is None:
            if all(d == t for d in here):
                linear_up_to = t
            else:
                first_bad = t
                bad_degree = max(d for d in here if d != t)
        module = syz.kernel
    touched = any(d == degree_bound for cover in covers for (_, d) in cover.spaces)
    return ResolutionReport(vertex, degs, gens, linear_up_to, first_bad, bad_degree, degree_bound, covers, module, touched)


@dataclass
class KoszulVerdict:
    """Outcome of resolving every simple.

    ``status`` is "linear" (all simples linear through the inspected steps),
    "almost-koszul" (linear for q steps, then step q + 1 generated purely in
    degree q + p) or "failure" (anything else; ``witness`` says where).
    """

    status: str
    p: int
    q: int
    steps: int
    pattern_holds: bool
    witness: dict = None
    reports: dict = field(default_factory=dict, repr=False)

    @property
    def linear_up_to(self):
        return self.q


def almost_koszul_check(bq, steps, degree_bound=None):
    p = loewy_length(bq) - 1
    reports = {v: graded_resolution(bq, v, steps, degree_bound) for v in bq.quiver.vertices}
    q = min((r.linear_up_to for r in reports.values()), default=steps)
    if q >= steps:
        return KoszulVerdict("linear", p, q, steps, True, None, reports)
    step = q + 1
    witness = None
    for v, r in reports.items():
        if r.linear_up_to == q and any(d != q + p for d in r.steps[step]):
            witness = {"simple": v, "step": step, "degrees": r.steps[step]}
            break
    holds = witness is None
    return KoszulVerdict("almost-koszul" if holds else "failure", p, q, steps, holds, witness, reports)


@dataclass
class TypeVerdict:
    verdict: str
    bound: int
    profile: list
    n: int


def type_classifier(gamma, degree_bound=8):
    """Bounded evidence for finite versus infinite type of a quadratic algebra Gamma.

    Builds Lambda = Gamma^!, its returning-arrow quiver, and the quadratic
    dual of the quadratic part of its relations; reports the dimension
    profile of that dual up to ``degree_bound``.
    """
    for r in gamma.relations:
        if r.length != 2:
            raise RelationError(f"not quadratic: {r}")
    from .constructions import returning_arrow_quiver

    lam = quadratic_dual(gamma)
    n = require_properly_graded(lam)
    raq = returning_arrow_quiver(lam)
    quad = BoundQuiver(raq.quiver, [r for r in raq.bound.relations if r.length == 2])
    pi = quadratic_dual(quad)
    alg = pi.algebra
    profile = [sum(len(k) for k in alg.level(t).values()) for t in range(degree_bound + 1)]
    verdict = "finite within bound" if profile[degree_bound] == 0 else "growing at bound"
    return TypeVerdict(verdict, degree_bound, profile, n)
