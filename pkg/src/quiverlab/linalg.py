"""Exact linear algebra over the rationals.

Vectors are sparse dicts mapping a column key to a nonzero ``Fraction``.
Column keys are arbitrary hashables; an explicit ``order`` (key -> int)
decides pivot preference so that echelon forms are reproducible.
"""

from fractions import Fraction


def clean(vec):
    return {k: v for k, v in vec.items() if v != 0}


def add_scaled(target, source, scale):
    """target += scale * source, in place, dropping zeros."""
    for k, v in source.items():
        nv = target.get(k, 0) + scale * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def scale(vec, c):
    if c == 0:
        return {}
    return {k: v * c for k, v in vec.items()}


class Echelon:
    """Incrementally maintained reduced row echelon form.

    The pivot of a row is its least column under ``order``. Rows are kept
    fully reduced, so every pivot column appears in exactly one row.
    """

    def __init__(self, order):
        self.order = order
        self.rows = {}  # pivot -> row (pivot coefficient 1)

    def _pivot(self, vec):
        return min(vec, key=self.order.__getitem__)

    def reduce(self, vec):
        """Return the remainder of ``vec`` modulo the row space."""
        vec = dict(vec)
        for k in [k for k in vec if k in self.rows]:
            c = vec.get(k)
            if c:
                add_scaled(vec, self.rows[k], -c)
        return vec

    def add(self, vec):
        """Insert ``vec``; return True when it enlarged the span."""
        vec = self.reduce(vec)
        if not vec:
            return False
        p = self._pivot(vec)
        vec = scale(vec, 1 / Fraction(vec[p]))
        for row in self.rows.values():
            c = row.get(p)
            if c:
                add_scaled(row, vec, -c)
        self.rows[p] = vec
        return True

    def __len__(self):
        return len(self.rows)

    def __contains__(self, vec):
        return not self.reduce(vec)

    def pivots(self):
        return sorted(self.rows, key=self.order.__getitem__)

    def basis(self):
        return [self.rows[p] for p in self.pivots()]


def rref(vectors, order):
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    return ech.basis()


def rank(vectors, order=None):
    vectors = [clean(v) for v in vectors]
    if order is None:
        keys = {k for v in vectors for k in v}
        order = {k: i for i, k in enumerate(sorted(keys, key=repr))}
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    return len(ech)


def same_span(a, b, order):
    ea, eb = Echelon(order), Echelon(order)
    for v in a:
        ea.add(v)
    for v in b:
        eb.add(v)
    return ea.basis() == eb.basis()


class _TrackedElimination:
    """Row reduction that remembers how each pivot row was combined."""

    def __init__(self):
        self.pivots = []  # (column, row, combination) in insertion order

    def reduce(self, vec, comb):
        for col, row, rcomb in self.pivots:
            c = vec.get(col)
            if c:
                add_scaled(vec, row, -c)
                add_scaled(comb, rcomb, -c)
        return vec, comb

    def insert(self, vec, comb):
        """Reduce and insert; return the leftover combination if dependent."""
        vec, comb = self.reduce(dict(vec), comb)
        if not vec:
            return comb
        col = next(iter(vec))
        c = 1 / Fraction(vec[col])
        self.pivots.append((col, scale(vec, c), scale(comb, c)))
        return None


def kernel(images, domain_order):
    """Basis of {c : sum_x c[x] * images[x] = 0}.

    ``images`` maps each domain key to its image vector. The returned
    kernel vectors are in reduced echelon form against ``domain_order``.
    """
    elim = _TrackedElimination()
    found = []
    for x in sorted(images, key=domain_order.__getitem__):
        comb = elim.insert(images[x], {x: Fraction(1)})
        if comb is not None:
            found.append(comb)
    return rref(found, domain_order)


def solve(basis, target):
    """Coefficients expressing ``target`` in the span of ``basis``.

    Returns a list of Fractions, or None when ``target`` is outside the span.
    """
    elim = _TrackedElimination()
    for i, v in enumerate(basis):
        elim.insert(v, {i: Fraction(1)})
    vec, comb = elim.reduce(dict(target), {})
    if vec:
        return None
    return [-comb.get(i, Fraction(0)) for i in range(len(basis))]


def complement(vectors, keys, order):
    """Basis of the orthogonal complement of span(vectors) in span(keys).

    The pairing makes the given keys orthonormal.
    """
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    out = []
    pivs = set(ech.rows)
    for free in keys:
        if free in pivs:
            continue
        vec = {free: Fraction(1)}
        for p, row in ech.rows.items():
            c = row.get(free)
            if c:
                vec[p] = -c
        out.append(vec)
    return rref(out, order)
