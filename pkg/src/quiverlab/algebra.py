"""Bound quivers, their path algebras, graded dimensions and quadratic duals.

All scalars are ``Fraction``. Ideals are homogeneous for path length, and the
quotient kQ/(rho) is computed one degree at a time: the degree t+1 piece is
(degree t basis) x (arrows) modulo the images of the relations, so only bases
of the quotient are ever stored.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .errors import BoundTooSmall, NotProperlyGraded, RelationError
from .quiver import Path, Quiver, vertex_label


class LinearCombination:
    """Rational combination of parallel paths (same source, target and length)."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for p, c in items:
            if isinstance(c, Path):
                p, c = c, p
            c = Fraction(c)
            acc[p] = acc.get(p, 0) + c
        self.terms = {p: c for p, c in acc.items() if c}
        ends = {(p.source, p.target) for p in self.terms}
        lengths = {len(p) for p in self.terms}
        if len(ends) > 1:
            raise RelationError(f"terms are not parallel: {self}")
        if len(lengths) > 1:
            raise RelationError(f"mixed lengths {sorted(lengths)} in one relation: {self}")

    @property
    def source(self):
        return next(iter(self.terms)).source

    @property
    def target(self):
        return next(iter(self.terms)).target

    @property
    def length(self):
        return len(next(iter(self.terms)))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LinearCombination) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            parts.append(f"{sign} {coef}{p}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


def combination(*terms):
    """Shorthand: combination((1, p), (-1, q))."""
    return LinearCombination(list(terms))


def normalize_relations(quiver, raw):
    """Split relations into (source, target, length) blocks and row-reduce each.

    Returns the echelon rows as LinearCombinations, blocks in canonical order.
    """
    blocks = defaultdict(list)
    for rel in raw:
        if not isinstance(rel, LinearCombination):
            rel = LinearCombination(rel)
        if not rel:
            continue
        if rel.length < 2:
            raise RelationError(f"relation of length {rel.length} < 2: {rel}")
        for p in rel.terms:
            quiver.path(*p.arrows)
        blocks[(rel.length, quiver.vertex_index[rel.source], quiver.vertex_index[rel.target])].append(rel)
    out = []
    for key in sorted(blocks):
        rows = blocks[key]
        paths = sorted({p for r in rows for p in r.terms}, key=quiver.path_key)
        order = {p: k for k, p in enumerate(paths)}
        for vec in linalg.rref([r.terms for r in rows], order):
            out.append(LinearCombination(sorted(vec.items(), key=lambda pc: order[pc[0]])))
    return tuple(out)


class BoundQuiver:
    """A quiver with normalized homogeneous relations."""

    def __init__(self, quiver, relations=(), normalized=False):
        self.quiver = quiver
        self.relations = tuple(relations) if normalized else normalize_relations(quiver, relations)

    def __repr__(self):
        return f"BoundQuiver({len(self.quiver.vertices)} vertices, {len(self.quiver.arrows)} arrows, {len(self.relations)} relations)"

    @cached_property
    def algebra(self):
        return PathAlgebra(self.quiver, self.relations)

    def default_degree_bound(self):
        longest = max((r.length for r in self.relations), default=0)
        nv = len(self.quiver.vertices)
        return max(nv * longest + 2, nv + 1)

    def relabel(self, mapping):
        q = self.quiver.relabel(mapping)
        rels = [LinearCombination({Path(mapping[p.source], mapping[p.target], p.arrows): c for p, c in r.terms.items()}) for r in self.relations]
        return BoundQuiver(q, rels)

    def relation_blocks(self):
        blocks = defaultdict(list)
        for r in self.relations:
            blocks[(r.source, r.target, r.length)].append(r)
        return dict(blocks)


class PathAlgebra:
    """Degree-by-degree model of kQ/(relations).

    A basis element is a key ``(source_index, word)`` where ``word`` is a
    tuple of arrow indices; its class is the class of that path. For each
    degree the standard words (non-pivots of the relation images) form a basis.
    """

    def __init__(self, quiver, relations=()):
        self.quiver = quiver
        self.src = [quiver.vertex_index[a.source] for a in quiver.arrows]
        self.tgt = [quiver.vertex_index[a.target] for a in quiver.arrows]
        self.out = [[] for _ in quiver.vertices]
        self.inc = [[] for _ in quiver.vertices]
        for k in range(len(quiver.arrows)):
            self.out[self.src[k]].append(k)
            self.inc[self.tgt[k]].append(k)
        self.rels = defaultdict(list)  # length -> [(source_index, target_index, {word: coef})]
        for r in relations:
            self._add_relation(r)
        self.levels = []  # degree -> {(s, t): [keys]}
        self.mult = []  # degree -> {(key, arrow): vector in degree + 1}

    def _add_relation(self, rel):
        if isinstance(rel, LinearCombination):
            ai = self.quiver.arrow_index
            combo = {tuple(ai[a] for a in p.arrows): c for p, c in rel.terms.items()}
            s = self.quiver.vertex_index[rel.source]
            t = self.quiver.vertex_index[rel.target]
            length = rel.length
        else:
            s, t, combo = rel
            length = len(next(iter(combo)))
        self.rels[length].append((s, t, combo))
        return length

    def add_relations(self, relations):
        """Add relations; cached degrees at or above their length are discarded."""
        lowest = None
        for r in relations:
            length = self._add_relation(r)
            lowest = length if lowest is None else min(lowest, length)
        if lowest is not None and lowest < len(self.levels):
            del self.levels[lowest:]
            del self.mult[lowest - 1:]

    # -- degree construction ---------------------------------------------

    def level(self, t):
        while len(self.levels) <= t:
            self._build_next()
        return self.levels[t]

    def _build_next(self):
        t = len(self.levels)
        if t == 0:
            self.levels.append({(v, v): [(v, ())] for v in range(len(self.quiver.vertices))})
            return
        prev = self.levels[t - 1]
        cands = defaultdict(list)
        for (s, j), keys in prev.items():
            for key in keys:
                for a in self.out[j]:
                    cands[(s, self.tgt[a])].append((s, key[1] + (a,)))
        echelons = {}
        for block, keys in cands.items():
            keys.sort(key=lambda k: k[1])
            echelons[block] = linalg.Echelon({k: n for n, k in enumerate(keys)})
        for length, rels in self.rels.items():
            if length > t:
                continue
            lower = self.levels[t - length]
            for u, k, combo in rels:
                for (s, uu), xs in lower.items():
                    if uu != u:
                        continue
                    ech = echelons.get((s, k))
                    for x in xs:
                        row = {}
                        for word, c in combo.items():
                            vec = self._apply({x: Fraction(1)}, word[:-1], t - length)
                            last = word[-1]
                            for (ss, w), d in vec.items():
                                key = (ss, w + (last,))
                                nv = row.get(key, 0) + c * d
                                if nv:
                                    row[key] = nv
                                else:
                                    row.pop(key, None)
                        if row:
                            ech.add(row)
        level = {}
        mult = {}
        for block, keys in cands.items():
            ech = echelons[block]
            std = [k for k in keys if k not in ech.rows]
            if std:
                level[block] = std
            for k in keys:
                row = ech.rows.get(k)
                if row is None:
                    mult[((k[0], k[1][:-1]), k[1][-1])] = {k: Fraction(1)}
                else:
                    reduced = {c: -v for c, v in row.items() if c != k}
                    mult[((k[0], k[1][:-1]), k[1][-1])] = reduced
        self.mult.append(mult)
        self.levels.append(level)

    def _apply(self, vec, word, degree):
        """Right-multiply a degree ``degree`` vector by the arrows of ``word``."""
        for a in word:
            self.level(degree + 1)
            table = self.mult[degree]
            new = {}
            for key, c in vec.items():
                img = table.get((key, a))
                if img is None:
                    continue
                for k2, d in img.items():
                    nv = new.get(k2, 0) + c * d
                    if nv:
                        new[k2] = nv
                    else:
                        new.pop(k2, None)
            vec = new
            degree += 1
            if not vec:
                break
        return vec

    # -- public helpers ----------------------------------------------------

    def word_of(self, path):
        ai = self.quiver.arrow_index
        return self.quiver.vertex_index[path.source], tuple(ai[a] for a in path.arrows)

    def normal_form_word(self, s, word):
        return self._apply({(s, ()): Fraction(1)}, word, 0) if word else {(s, ()): Fraction(1)}

    def normal_form(self, path):
        s, word = self.word_of(path)
        return self.normal_form_word(s, word)

    def reduce(self, combo):
        """Normal form of a LinearCombination (or {Path: coef})."""
        terms = combo.terms if isinstance(combo, LinearCombination) else combo
        out = {}
        for p, c in terms.items():
            linalg.add_scaled(out, self.normal_form(p), c)
        return out

    def multiply(self, vec, word, degree):
        return self._apply(dict(vec), word, degree)

    def left_multiply(self, arrow, key):
        s, word = key
        return self.normal_form_word(self.src[arrow], (arrow,) + word)

    def key_path(self, key):
        s, word = key
        q = self.quiver
        if not word:
            v = q.vertices[s]
            return Path(v, v, ())
        return Path(q.vertices[s], q.arrows[word[-1]].target, tuple(q.arrows[a].id for a in word))

    def key_target(self, key):
        s, word = key
        return self.tgt[word[-1]] if word else s

    def to_combination(self, vec):
        return LinearCombination({self.key_path(k): c for k, c in vec.items()})

    def basis(self, t, s=None, k=None):
        lev = self.level(t)
        if s is not None and k is not None:
            return list(lev.get((s, k), []))
        return [key for block in sorted(lev) for key in lev[block]]

    def dim(self, s, k, t):
        return len(self.level(t).get((s, k), []))

    def top_degree(self, bound):
        """Largest degree <= bound with a nonzero piece; BoundTooSmall if ``bound`` is still nonzero."""
        if self.level(bound):
            raise BoundTooSmall(f"algebra still nonzero in degree {bound}; raise the degree bound")
        top = 0
        for t in range(bound):
            if self.level(t):
                top = t
        return top


def bound_path_basis(bq, i, j, t, degree_bound=None):
    """Paths i -> j of length t whose classes form a basis of e_j Lambda_t e_i."""
    bound = bq.default_degree_bound() if degree_bound is None else degree_bound
    if t > bound:
        raise BoundTooSmall(f"degree {t} exceeds bound {bound}")
    alg = bq.algebra
    vi = bq.quiver.vertex_index
    return [alg.key_path(k) for k in alg.basis(t, vi[i], vi[j])]


@dataclass(frozen=True)
class DimensionTable:
    """dim e_j Lambda_t e_i keyed by (i, j, t) for t <= bound; absent keys are 0."""

    entries: dict
    bound: int

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def total(self):
        return sum(self.entries.values())

    def by_degree(self):
        out = [0] * (self.bound + 1)
        for (_, _, t), d in self.entries.items():
            out[t] += d
        return out

    def rows(self, quiver):
        """Sorted [i, j, t, dim] rows for reports."""
        vi = quiver.vertex_index
        keys = sorted(self.entries, key=lambda k: (k[2], vi[k[0]], vi[k[1]]))
        return [[k[0], k[1], k[2], self.entries[k]] for k in keys]


def dimension_table(bq, degree_bound=None):
    bound = bq.default_degree_bound() if degree_bound is None else degree_bound
    alg = bq.algebra if isinstance(bq, BoundQuiver) else bq
    vs = alg.quiver.vertices
    entries = {}
    for t in range(bound + 1):
        for (s, k), keys in alg.level(t).items():
            entries[(vs[s], vs[k], t)] = len(keys)
    return DimensionTable(entries, bound)


@dataclass
class MaximalBoundPathBasis:
    """Basis of the classes annihilated by every arrow on both sides.

    ``elements[k]`` is the echelon representative whose dual functional is
    the k-th coordinate; ``vectors[k]`` is the same element in normal-form keys.
    """

    elements: list
    vectors: list = field(repr=False)
    degrees: list

    def __len__(self):
        return len(self.elements)

    def lengths(self):
        return sorted(set(self.degrees))


def maximal_bound_paths(bq, degree_bound=None):
    alg = bq.algebra if isinstance(bq, BoundQuiver) else bq
    bound = bq.default_degree_bound() if degree_bound is None else degree_bound
    alg.top_degree(bound)
    elements, vectors, degrees = [], [], []
    for t in range(bound):
        lev = alg.level(t)
        for block in sorted(lev):
            keys = lev[block]
            s, k = block
            images = {}
            for key in keys:
                img = {}
                for a in alg.out[k]:
                    for k2, c in alg.multiply({key: Fraction(1)}, (a,), t).items():
                        img[("r", a, k2)] = c
                for a in alg.inc[s]:
                    for k2, c in alg.left_multiply(a, key).items():
                        img[("l", a, k2)] = c
                images[key] = img
            order = {key: n for n, key in enumerate(keys)}
            for vec in linalg.kernel(images, order):
                vectors.append(vec)
                elements.append(alg.to_combination(vec))
                degrees.append(t)
    return MaximalBoundPathBasis(elements, vectors, degrees)


def is_n_properly_graded(bq, degree_bound=None):
    """n when every maximal bound path has length n, otherwise None."""
    lengths = maximal_bound_paths(bq, degree_bound).lengths()
    return lengths[0] if len(lengths) == 1 else None


def properly_graded_witnesses(bq, degree_bound=None):
    """Two maximal bound paths of different lengths, or None."""
    mb = maximal_bound_paths(bq, degree_bound)
    for k, d in enumerate(mb.degrees):
        if d != mb.degrees[0]:
            return mb.elements[0], mb.elements[k]
    return None


def require_properly_graded(bq, degree_bound=None):
    n = is_n_properly_graded(bq, degree_bound)
    if n is None:
        pair = properly_graded_witnesses(bq, degree_bound)
        detail = f": {pair[0]} has length {pair[0].length}, {pair[1]} has length {pair[1].length}" if pair else ""
        raise NotProperlyGraded("maximal bound paths differ in length" + detail)
    return n


def quadratic_dual(bq):
    """Orthogonal complement of the relations inside each block of length-2 paths."""
    q = bq.quiver
    for r in bq.relations:
        if r.length != 2:
            raise RelationError(f"non-quadratic relation {r}")
    by_block = defaultdict(list)
    for r in bq.relations:
        by_block[(r.source, r.target)].append(r.terms)
    paths = defaultdict(list)
    for p in q.paths(2):
        paths[(p.source, p.target)].append(p)
    dual = []
    for block in sorted(paths, key=lambda b: (q.vertex_index[b[0]], q.vertex_index[b[1]])):
        keys = sorted(paths[block], key=q.path_key)
        order = {p: n for n, p in enumerate(keys)}
        for vec in linalg.complement(by_block.get(block, []), keys, order):
            dual.append(LinearCombination(sorted(vec.items(), key=lambda pc: order[pc[0]])))
    return BoundQuiver(q, dual)


@dataclass(frozen=True)
class ClosureVerdict:
    quadratic: bool
    failing_degree: int = None
    witness: object = None
    expected: tuple = ()
    generated: tuple = ()


def quadratic_closure_check(bq, loewy_bound, profile=None):
    """Does the ideal generated by the degree-2 relations present the algebra?

    The expected profile is the dimension by degree of ``bq`` itself up to
    ``loewy_bound`` and zero one degree above, unless ``profile`` is given.
    """
    quad = [r for r in bq.relations if r.length == 2]
    quad_alg = PathAlgebra(bq.quiver, quad)
    full_alg = bq.algebra
    vs = bq.quiver.vertices
    expected, generated = [], []
    for d in range(loewy_bound + 2):
        got = {b: len(k) for b, k in quad_alg.level(d).items()}
        if profile is not None:
            want_total = profile[d] if d < len(profile) else 0
            want = None
        elif d <= loewy_bound:
            want = {b: len(k) for b, k in full_alg.level(d).items()}
            want_total = sum(want.values())
        else:
            want, want_total = {}, 0
        expected.append(want_total)
        generated.append(sum(got.values()))
        mismatch = (want is not None and want != got) or (want is None and sum(got.values()) != want_total)
        if mismatch:
            witness = None
            for block, keys in sorted(quad_alg.level(d).items()):
                if want is None or len(keys) != want.get(block, 0):
                    witness = quad_alg.key_path(keys[0])
                    break
            if witness is None:
                missing = sorted(set(want) - set(got))
                if missing:
                    s, t = missing[0]
                    witness = (vs[s], vs[t])
            return ClosureVerdict(False, d, witness, tuple(expected), tuple(generated))
    return ClosureVerdict(True, None, None, tuple(expected), tuple(generated))


def paths_text(paths):
    return ", ".join(str(p) for p in paths)


def block_label(s, t):
    return f"{vertex_label(s)}->{vertex_label(t)}"
